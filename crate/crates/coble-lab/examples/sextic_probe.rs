//! Probe: interpolate the dual of the cubic over a large prime and report
//! degree, nullspace diagnostics, and invariance of the result.
//! Usage: cargo run --release --example sextic_probe [p] [a0,a1,a2,a3,a4] [seed]

use coble_lab::coble::{self, CobleParams, GammaSign};
use coble_lab::dualscan::{dual_interpolate, DualOutcome};
use coble_lab::fields::FieldSpec;
use coble_lab::heis::{self, HeisenbergElement, Invariance};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let p: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10009);
    let alpha: [i64; 5] = args
        .get(2)
        .map(|s| {
            let v: Vec<i64> = s.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3], v[4]]
        })
        .unwrap_or([30, 3, 29, 21, 7]);
    let seed: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(42);
    let field = FieldSpec::prime(p).unwrap();
    let params = CobleParams::from_i64(field.clone(), alpha).unwrap();
    let g = coble::build_cubic(&params);
    eprintln!("cubic built: {} terms over F_{p}", g.num_terms());
    let t0 = std::time::Instant::now();
    match dual_interpolate(&g, 6, 1.1, seed) {
        Ok(DualOutcome::Found(r)) => {
            eprintln!(
                "dual degree {} terms {} nullity {} prev_nullity {:?} rows {} holdout {} in {:.1}s",
                r.degree,
                r.dual.num_terms(),
                r.nullity,
                r.prev_degree_nullity,
                r.rows_used,
                r.holdout_checked,
                t0.elapsed().as_secs_f64()
            );
            let tau = heis::tau_act(&r.dual) == r.dual;
            eprintln!("tau-invariant: {tau}");
            for gen in HeisenbergElement::generators() {
                let inv = heis::check_invariant(&r.dual, &gen).unwrap();
                eprintln!("generator {:?}: {:?}", gen, matches!(inv, Invariance::Strict));
            }
            let h = coble::check_fixed_locus_mapping(&r.dual, GammaSign::Minus);
            eprintln!("fixed-locus mapping (minus, even): {:?}", h.map(|v| v.pass));
            let c = coble::check_restricted_dual_commutes(&r.dual, GammaSign::Minus);
            eprintln!("restricted dual commutes (minus): {:?}", c.map(|v| v.pass));
        }
        Ok(other) => eprintln!("outcome: {other:?} in {:.1}s", t0.elapsed().as_secs_f64()),
        Err(e) => eprintln!("error: {e} after {:.1}s", t0.elapsed().as_secs_f64()),
    }
}
