pub mod boolean_rep;
pub mod corr_dim;
pub mod dynamics;
pub mod prob_scan;
pub mod rec_plot;
pub mod rqa_cmd;
pub mod select_pattern;
