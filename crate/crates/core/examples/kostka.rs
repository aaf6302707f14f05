//! Kostka numbers, the diagonal blocks of the monomial-to-PBW transition.

use qaffine::pbw_index::{dominance_leq, kostka};
use qaffine::strata::induced_multiplicity;
use qaffine::Partition;

fn main() {
    let m: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let parts = Partition::all_of(m);
    print!("{:>10}", "K[l,mu]");
    for mu in &parts {
        print!("{:>10}", mu.to_string());
    }
    println!();
    for l in &parts {
        print!("{:>10}", l.to_string());
        for mu in &parts {
            assert_eq!(kostka(l, mu) > 0, dominance_leq(mu, l));
            assert_eq!(induced_multiplicity(mu, l), kostka(l, mu));
            print!("{:>10}", kostka(l, mu));
        }
        println!();
    }
}
