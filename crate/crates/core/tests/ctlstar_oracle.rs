mod common;

use std::collections::BTreeSet;

use common::{eval_path, lassos, Letter, Word};
use deontic_mc::automaton::random::{random_automaton, RandomAutomatonConfig};
use deontic_mc::ctlstar::{check_universal, ltl_to_buchi, strip_weights, LassoWord};
use deontic_mc::formula::random::FormulaGen;
use deontic_mc::formula::{parse_formula, Formula};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn no_state(_: &Formula, _: usize) -> bool {
    unreachable!("quantifier-free")
}

fn path_gen() -> FormulaGen {
    FormulaGen { quantifiers: false, ..FormulaGen::default() }.with_atoms(["p", "q"]).depth(4)
}

fn random_word(rng: &mut ChaCha8Rng) -> (Vec<Letter>, usize) {
    let len = rng.gen_range(1..=6);
    let letters: Vec<Letter> = (0..len)
        .map(|_| ["p", "q"].iter().filter(|_| rng.gen_bool(0.5)).map(|s| s.to_string()).collect())
        .collect();
    let loop_start = rng.gen_range(0..len);
    (letters, loop_start)
}

fn lasso_word(letters: &[Letter], loop_start: usize) -> LassoWord {
    LassoWord { stem: letters[..loop_start].to_vec(), cycle: letters[loop_start..].to_vec() }
}

#[test]
fn universal_check_agrees_with_lasso_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = RandomAutomatonConfig { max_states: 5, ..Default::default() };
    let gen = path_gen();
    let (mut failing, mut holding) = (0, 0);
    for _ in 0..300 {
        let t = random_automaton(&mut rng, &cfg);
        let ts = strip_weights(&t).unwrap();
        let f = gen.formula(&mut rng);
        let r = check_universal(&ts, &f).unwrap();
        let violating = lassos(&ts.succ, ts.initial, 6, 6).into_iter().find(|(path, start)| {
            let letters: Vec<Letter> = path.iter().map(|&s| ts.labels[s].clone()).collect();
            !eval_path(&f, &Word { letters: &letters, loop_start: *start }, 0, &no_state)
        });
        if r.holds {
            holding += 1;
            assert!(violating.is_none(), "{f} holds per checker but {violating:?} violates it on\n{}", t.to_json());
        } else {
            failing += 1;
            let cx = r.counterexample.unwrap();
            let idx = |s: &String| ts.index_of(s).unwrap();
            let path: Vec<usize> = cx.stem.iter().chain(&cx.cycle).map(idx).collect();
            let letters: Vec<Letter> = path.iter().map(|&s| ts.labels[s].clone()).collect();
            assert_eq!(path[0], ts.initial);
            for w in path.windows(2) {
                assert!(ts.succ[w[0]].contains(&w[1]));
            }
            assert!(ts.succ[*path.last().unwrap()].contains(&path[cx.stem.len()]));
            assert!(!eval_path(&f, &Word { letters: &letters, loop_start: cx.stem.len() }, 0, &no_state));
        }
    }
    assert!(failing > 30 && holding > 30, "{failing} failing, {holding} holding");
}

#[test]
fn buchi_language_matches_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let gen = path_gen();
    for _ in 0..300 {
        let f = gen.formula(&mut rng);
        let ba = ltl_to_buchi(&f).unwrap();
        for _ in 0..10 {
            let (letters, start) = random_word(&mut rng);
            let expected = eval_path(&f, &Word { letters: &letters, loop_start: start }, 0, &no_state);
            assert_eq!(ba.accepts(&lasso_word(&letters, start)), expected, "{f} on {letters:?} from {start}");
        }
    }
}

fn all_words(max_len: usize) -> Vec<(Vec<Letter>, usize)> {
    let letters: Vec<Letter> = vec![BTreeSet::new(), BTreeSet::from(["p".into()]), BTreeSet::from(["q".into()]), BTreeSet::from(["p".into(), "q".into()])];
    let mut out = Vec::new();
    let mut seqs: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..max_len {
        seqs = seqs
            .iter()
            .flat_map(|s| letters.iter().map(move |l| {
                let mut v = s.clone();
                v.push(l.clone());
                v
            }))
            .collect();
        for s in &seqs {
            for start in 0..s.len() {
                out.push((s.clone(), start));
            }
        }
    }
    out
}

fn language_equal(a: &str, b: &str) {
    let (fa, fb) = (ltl_to_buchi(&parse_formula(a).unwrap()).unwrap(), ltl_to_buchi(&parse_formula(b).unwrap()).unwrap());
    for (letters, start) in all_words(4) {
        let w = lasso_word(&letters, start);
        assert_eq!(fa.accepts(&w), fb.accepts(&w), "{a} vs {b} on {letters:?} from {start}");
    }
}

#[test]
fn standard_identities() {
    language_equal("F p", "!G !p");
    language_equal("p U q", "q | (p & X (p U q))");
    language_equal("p R q", "!(!p U !q)");
    language_equal("X (p & q)", "X p & X q");
    language_equal("X (p | q)", "X p | X q");
    language_equal("G p", "false R p");
    language_equal("(!p) BR[2] q", "!p | (q & X (!p | (q & X (!p | q))))");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn negation_complements_language(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = path_gen().formula(&mut rng);
        let (pos, neg) = (ltl_to_buchi(&f).unwrap(), ltl_to_buchi(&f.clone().not()).unwrap());
        for _ in 0..8 {
            let (letters, start) = random_word(&mut rng);
            let w = lasso_word(&letters, start);
            prop_assert_ne!(pos.accepts(&w), neg.accepts(&w));
        }
    }
}
