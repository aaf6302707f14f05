//! Inner products of divided-power words by three independent evaluators.

use qaffine::gram::{inner_product, inner_product_bruteforce, inner_product_coproduct};
use qaffine::qfield::divided_power_norm;
use qaffine::{CartanDatum, CartanType, MonomialWord, TruncSeries};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let datum = CartanDatum::new(CartanType::A, 2)?;
    let pairs = [
        ("f1", "f1"),
        ("f1 f2", "f2 f1"),
        ("f1 f2", "f1 f2"),
        ("f0 f2^(2) f1", "f2 f0 f2 f1"),
        ("f1^(3)", "f1^(3)"),
    ];
    for (a, b) in pairs {
        let w1: MonomialWord = a.parse()?;
        let w2: MonomialWord = b.parse()?;
        let dp = inner_product(&datum, &w1, &w2);
        assert_eq!(dp, inner_product_bruteforce(&datum, &w1, &w2));
        assert_eq!(dp, inner_product_coproduct(&datum, &w1, &w2));
        println!("({a}, {b}) = {dp}");
        println!("    = {}", TruncSeries::of(&dp, 8));
    }
    for c in 1..=4 {
        println!("(f^({c}), f^({c})) = {}", divided_power_norm(c));
    }
    Ok(())
}
