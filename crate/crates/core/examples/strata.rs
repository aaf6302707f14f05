//! Stratum data of the indices of a weight and the fiber of the stratum map.

use qaffine::pbw_index::total_order;
use qaffine::strata::{orientation_from_order, stratum_data_of_index, stratum_fiber};
use qaffine::{BetaSequence, CartanDatum, CartanType, Root};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let weight = std::env::args().nth(1).unwrap_or_else(|| "2,2,2".into());
    let nu = Root(qaffine::cli::parse_weight(&weight)?);

    let datum = CartanDatum::new(CartanType::A, 2)?;
    let seq = BetaSequence::build(&datum)?;
    println!("quiver {}", orientation_from_order(&datum, seq.vertex_order())?);
    for c in &total_order(&nu, &seq)?.indices {
        let data = stratum_data_of_index(c, &seq)?;
        let fiber = stratum_fiber(&data, &seq)?;
        println!("{c:<28} {data}  ({} indices share it)", fiber.len());
    }
    Ok(())
}
