//! Seeded generator of small valid models.
//!
//! Children of each branching moment are laid out on a grid, one axis per
//! agent, so every selection of one action per agent meets at a child and
//! independence holds by construction.

use rand::Rng;

use super::{ChoiceSpec, ExplicitStitModel, HistorySpec, LabelSpec, MomentId, MomentSpec};
use crate::value::Value;

#[derive(Debug, Clone)]
pub struct RandomModelConfig {
    pub max_depth: usize,
    pub max_histories: usize,
    /// Candidate agents; each model uses a non-empty prefix of this list.
    pub agents: Vec<String>,
    pub atoms: Vec<String>,
    pub max_value: i64,
    /// Probability that an atom labels a given `m/h` pair.
    pub label_density: f64,
}

impl Default for RandomModelConfig {
    fn default() -> Self {
        RandomModelConfig {
            max_depth: 3,
            max_histories: 6,
            agents: vec!["alpha".into(), "beta".into()],
            atoms: vec!["p".into(), "q".into()],
            max_value: 4,
            label_density: 0.5,
        }
    }
}

struct Builder<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    agents: Vec<String>,
    moments: Vec<MomentSpec>,
    choices: Vec<ChoiceSpec>,
    leaves: Vec<Vec<MomentId>>,
    next_id: MomentId,
}

impl<R: Rng + ?Sized> Builder<'_, R> {
    /// Grows the subtree below `id` and returns the indices of its leaves.
    fn grow(&mut self, id: MomentId, path: Vec<MomentId>, depth_left: usize, budget: usize) -> Vec<usize> {
        if depth_left == 0 || budget <= 1 || self.rng.gen_bool(0.25) {
            self.leaves.push(path);
            return vec![self.leaves.len() - 1];
        }
        let mut dims: Vec<usize> = (0..self.agents.len()).map(|_| self.rng.gen_range(1..=3)).collect();
        while dims.iter().product::<usize>() > budget {
            let i = (0..dims.len()).max_by_key(|&i| dims[i]).unwrap();
            dims[i] -= 1;
        }
        let cells: usize = dims.iter().product();
        let mut cell_of_child: Vec<usize> = (0..cells).collect();
        let mut spare = budget - cells;
        for cell in 0..cells {
            if spare > 0 && self.rng.gen_bool(0.2) {
                cell_of_child.push(cell);
                spare -= 1;
            }
        }
        cell_of_child.sort_unstable();
        let mut shares = vec![1usize; cell_of_child.len()];
        for _ in 0..spare {
            if self.rng.gen_bool(0.6) {
                let i = self.rng.gen_range(0..shares.len());
                shares[i] += 1;
            }
        }

        let mut under_child = Vec::new();
        for &share in &shares {
            let cid = self.next_id;
            self.next_id += 1;
            self.moments.push(MomentSpec { id: cid, parent: Some(id) });
            let mut p = path.clone();
            p.push(cid);
            under_child.push(self.grow(cid, p, depth_left - 1, share));
        }

        for (axis, agent) in self.agents.iter().enumerate() {
            if dims[axis] < 2 {
                continue;
            }
            let stride: usize = dims[..axis].iter().product();
            let mut actions = vec![Vec::new(); dims[axis]];
            for (child, &cell) in cell_of_child.iter().enumerate() {
                let coord = (cell / stride) % dims[axis];
                actions[coord].extend(under_child[child].iter().map(|l| format!("h{}", l + 1)));
            }
            self.choices.push(ChoiceSpec {
                agent: agent.clone(),
                moment: id,
                actions,
            });
        }
        under_child.concat()
    }
}

/// Builds a random valid model. Moments have depth at most `max_depth`,
/// there are at most `max_histories` histories, and values are integers in
/// `0..=max_value`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomModelConfig) -> ExplicitStitModel {
    let n_agents = rng.gen_range(1..=cfg.agents.len().max(1)).min(cfg.agents.len());
    let agents: Vec<String> = cfg.agents[..n_agents].to_vec();
    let mut b = Builder {
        rng,
        agents: agents.clone(),
        moments: vec![MomentSpec { id: 0, parent: None }],
        choices: Vec::new(),
        leaves: Vec::new(),
        next_id: 1,
    };
    b.grow(0, vec![0], cfg.max_depth, cfg.max_histories.max(1));
    let Builder {
        rng,
        moments,
        choices,
        leaves,
        ..
    } = b;

    let histories: Vec<HistorySpec> = leaves
        .iter()
        .enumerate()
        .map(|(i, path)| HistorySpec {
            id: format!("h{}", i + 1),
            moments: path.clone(),
            value: Value::int(rng.gen_range(0..=cfg.max_value)),
        })
        .collect();
    let mut labels = Vec::new();
    for h in &histories {
        for &m in &h.moments {
            let atoms: Vec<String> = cfg.atoms.iter().filter(|_| rng.gen_bool(cfg.label_density)).cloned().collect();
            if !atoms.is_empty() {
                labels.push(LabelSpec {
                    moment: m,
                    history: h.id.clone(),
                    atoms,
                });
            }
        }
    }
    ExplicitStitModel {
        agents,
        atoms: cfg.atoms.clone(),
        moments,
        histories,
        choices,
        labels,
    }
}
