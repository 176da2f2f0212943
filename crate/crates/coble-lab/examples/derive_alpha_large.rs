//! Derive the large-prime alpha fixture and confirm the dual degree.
//! Usage: cargo run --release --example derive_alpha_large [p] [seed]

use coble_lab::coble::build_cubic;
use coble_lab::dualscan::{dual_interpolate, find_special_alpha_large, DualOutcome};

fn main() {
    let p: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10009);
    let seed: u64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let t0 = std::time::Instant::now();
    let fx = match find_special_alpha_large(p, seed) {
        Ok(fx) => fx,
        Err(e) => {
            eprintln!("search failed: {e}");
            std::process::exit(1);
        }
    };
    eprintln!(
        "candidate after {} tries in {:.1}s: alpha = {:?}",
        fx.candidates_tried,
        t0.elapsed().as_secs_f64(),
        fx.alpha
    );
    let g = build_cubic(&fx.params());
    let t1 = std::time::Instant::now();
    match dual_interpolate(&g, 6, 1.1, 42) {
        Ok(DualOutcome::Found(r)) => {
            eprintln!(
                "dual degree {} nullity {} prev {:?} in {:.1}s",
                r.degree,
                r.nullity,
                r.prev_degree_nullity,
                t1.elapsed().as_secs_f64()
            );
            println!("{}", fx.to_json());
        }
        other => {
            eprintln!("dual outcome: {other:?} in {:.1}s", t1.elapsed().as_secs_f64());
            std::process::exit(2);
        }
    }
}
