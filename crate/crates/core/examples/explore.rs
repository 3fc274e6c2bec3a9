//! Compares closure components with normal-form classes over every term up
//! to a complexity.
//!
//! `cargo run --release -p ordterm-core --example explore -- MAX_COMPLEXITY [BOUND]`

use ordterm_core::oracle::{closure::Components, enumerate::all_terms};
use ordterm_core::{normal_form, Term};
use std::collections::HashMap;
use std::time::Instant;

fn main() {
    let maxc: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().unwrap())
        .unwrap_or(6);
    let bound: u64 = std::env::args()
        .nth(2)
        .map(|s| s.parse().unwrap())
        .unwrap_or(maxc + 4);
    let terms = all_terms(maxc);
    println!("{} terms", terms.len());
    let start = Instant::now();
    let comps = Components::explore(terms.iter(), bound, 50_000_000).unwrap();
    println!(
        "{} nodes, {} comps, {:?}",
        comps.node_count(),
        comps.component_count(),
        start.elapsed()
    );
    let mut by_comp: HashMap<usize, Vec<(Term, Term)>> = HashMap::new();
    let mut by_nf: HashMap<Term, Vec<(usize, Term)>> = HashMap::new();
    for t in &terms {
        let c = comps.component(t).unwrap();
        let nf = normal_form(t);
        by_comp.entry(c).or_default().push((t.clone(), nf.clone()));
        by_nf.entry(nf).or_default().push((c, t.clone()));
    }
    let mut bad = 0;
    for v in by_comp.values() {
        let nf0 = &v[0].1;
        if let Some(x) = v.iter().find(|x| &x.1 != nf0) {
            bad += 1;
            if bad < 30 {
                println!(
                    "CONNECTED but nf differ: {} (nf {}) ~ {} (nf {})",
                    v[0].0, nf0, x.0, x.1
                );
            }
        }
    }
    for (nf, v) in &by_nf {
        let c0 = v[0].0;
        if let Some(x) = v.iter().find(|x| x.0 != c0) {
            bad += 1;
            if bad < 60 {
                println!("same nf {} but not connected: {} vs {}", nf, v[0].1, x.1);
            }
        }
    }
    println!("bad = {bad}");
}
