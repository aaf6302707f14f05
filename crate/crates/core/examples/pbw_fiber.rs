//! The PBW indices of one weight in the total order, grouped into classes.
//!
//! `cargo run --example pbw_fiber -- 2,2,2`

use qaffine::gram::{Engine, InnerProductCache};
use qaffine::monomial::m_index;
use qaffine::pbw_index::total_order;
use qaffine::solver::resolve_monomials;
use qaffine::{BetaSequence, CartanDatum, CartanType, Root};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let weight = std::env::args().nth(1).unwrap_or_else(|| "1,1,1".into());
    let nu = Root(qaffine::cli::parse_weight(&weight)?);

    let seq = BetaSequence::build(&CartanDatum::new(CartanType::A, 2)?)?;
    let fiber = total_order(&nu, &seq)?;
    println!("{} indices of weight {nu} in {} classes", fiber.len(), fiber.classes.len());
    let table = resolve_monomials(&seq, std::slice::from_ref(&nu), Engine::Dp, &InnerProductCache::new(), 10)?;
    for (w, word) in table.iter() {
        println!("m({w}) replaced by {word}");
    }
    for (ci, range) in fiber.classes.iter().enumerate() {
        for c in &fiber.indices[range.clone()] {
            println!("class {ci:>2}  {c:<32} m = {}", m_index(c, &seq, &table)?);
        }
    }
    Ok(())
}
