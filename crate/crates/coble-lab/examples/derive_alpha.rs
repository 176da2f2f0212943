//! Derive the shipped alpha fixture: seeded search at p = 31.
//! Usage: cargo run --release --example derive_alpha [seed]

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let t0 = std::time::Instant::now();
    match coble_lab::dualscan::find_special_alpha(31, seed) {
        Ok(fx) => {
            println!("{}", fx.to_json());
            eprintln!(
                "found after {} candidates in {:.1}s",
                fx.candidates_tried,
                t0.elapsed().as_secs_f64()
            );
        }
        Err(e) => {
            eprintln!("search failed: {e}");
            std::process::exit(1);
        }
    }
}
