//! Perfect tuples: sigma(n_1, ..., n_r) = 2 gcd(n_1, ..., n_r).
use mularith::asymptotics::search_perfect_tuples;

fn main() -> mularith::Result<()> {
    println!("r=1, B=10000: {:?}", search_perfect_tuples(1, 10_000)?);
    println!("r=2, B=50: {:?}", search_perfect_tuples(2, 50)?);
    println!("r=3, B=10: {:?}", search_perfect_tuples(3, 10)?);
    Ok(())
}
