//! Canonical basis of one weight in terms of the PBW basis.
//!
//! `cargo run --release --example canonical_basis -- 2,2,2`

use qaffine::gram::{gram_matrix, Engine, InnerProductCache};
use qaffine::pbw_index::total_order;
use qaffine::solver::{decompose, resolve_monomials, verify};
use qaffine::{BetaSequence, CartanDatum, CartanType, Root};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let weight = std::env::args().nth(1).unwrap_or_else(|| "1,1,1".into());
    let nu = Root(qaffine::cli::parse_weight(&weight)?);

    let seq = BetaSequence::build(&CartanDatum::new(CartanType::A, 2)?)?;
    let cache = InnerProductCache::new();
    let table = resolve_monomials(&seq, std::slice::from_ref(&nu), Engine::Dp, &cache, 10)?;
    let fiber = total_order(&nu, &seq)?;
    let gram = gram_matrix(&fiber, &seq, &table, Engine::Dp, &cache)?;
    let dec = decompose(&gram)?;

    // b(c) = L(c) + sum_{c < c'} p_{c',c} L(c')
    for (b, c) in fiber.indices.iter().enumerate() {
        let terms: Vec<String> = (0..fiber.len())
            .filter(|&a| a != b && !dec.p[a][b].is_zero())
            .map(|a| format!("({}) L{}", dec.p[a][b], fiber.indices[a]))
            .collect();
        if terms.is_empty() {
            println!("b{c} = L{c}");
        } else {
            println!("b{c} = L{c} + {}", terms.join(" + "));
        }
    }
    let report = verify(&dec, &gram.entries, 10);
    for check in &report.checks {
        println!("{:<52} {}", check.name, if check.passed { "ok" } else { "FAILED" });
    }
    Ok(())
}
