pub mod formula;
pub mod tree_model;
pub mod value;
pub mod automaton;
pub mod ctlstar;
pub mod mc;
pub mod rss;
pub mod cli;
