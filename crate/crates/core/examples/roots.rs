//! The doubly infinite sequence `h` for an affine type and its real roots.
//!
//! `cargo run --example roots -- D 4`

use qaffine::strata::{classify_indecomposable, orientation_from_order};
use qaffine::{BetaSequence, CartanDatum, CartanType};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let kind: CartanType = args.next().as_deref().unwrap_or("A").parse()?;
    let rank: usize = args.next().as_deref().unwrap_or("2").parse()?;

    let datum = CartanDatum::new(kind, rank)?;
    let seq = BetaSequence::build(&datum)?;
    println!("type {kind}{rank}, delta = {}", datum.delta());
    println!("word of t_rho: {:?}  (length {})", seq.word(), seq.period());
    println!("tau: {:?}", seq.tau());
    println!("order on I: {:?}", seq.vertex_order());
    println!("quiver: {}", orientation_from_order(&datum, seq.vertex_order())?);

    let n = seq.period() as i64;
    for (k, beta) in seq.beta_window(-n, n + 1) {
        let class = classify_indecomposable(&seq, &beta)?;
        println!("{k:>4}  {:<28} defect {:>3}  {class}", beta.to_string(), seq.defect(&beta));
    }
    Ok(())
}
