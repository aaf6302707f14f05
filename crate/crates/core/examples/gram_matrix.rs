//! The Gram matrix of the monomial basis on one fiber.
//!
//! `cargo run --example gram_matrix -- 1,1,1`

use qaffine::gram::{gram_matrix, Engine, InnerProductCache};
use qaffine::pbw_index::total_order;
use qaffine::solver::{determinant, resolve_monomials};
use qaffine::{BetaSequence, CartanDatum, CartanType, Root};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let weight = std::env::args().nth(1).unwrap_or_else(|| "1,1,1".into());
    let nu = Root(qaffine::cli::parse_weight(&weight)?);

    let seq = BetaSequence::build(&CartanDatum::new(CartanType::A, 2)?)?;
    let cache = InnerProductCache::new();
    let table = resolve_monomials(&seq, std::slice::from_ref(&nu), Engine::Dp, &cache, 10)?;
    for (w, m) in table.iter() {
        println!("m({w}) replaced by {m}");
    }
    let fiber = total_order(&nu, &seq)?;
    let gram = gram_matrix(&fiber, &seq, &table, Engine::Dp, &cache)?;
    for (a, row) in gram.entries.iter().enumerate() {
        println!("{:<24} {}", gram.words[a].to_string(), fiber.indices[a]);
        for (b, x) in row.iter().enumerate() {
            if !x.is_zero() {
                println!("    [{a},{b}] {x}");
            }
        }
    }
    println!("det = {}", determinant(&gram.entries));
    Ok(())
}
