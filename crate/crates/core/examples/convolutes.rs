//! Convolutes: collapsing several variables to one.
use mularith::catalog::function;
use mularith::convolute::{convolute, convolute_definitional, count_functions, named_convolutes, ConvoluteKind};

fn main() -> mularith::Result<()> {
    let gcd = function("gcd", 2, None)?;
    for kind in ConvoluteKind::ALL {
        let fast = convolute(kind, &gcd)?;
        let slow = convolute_definitional(kind, &gcd);
        let row: Vec<String> = (1..=12).map(|n| fast.value(&[n]).to_string()).collect();
        assert!((1..=12).all(|n| fast.value(&[n]) == slow.value(&[n])));
        println!("psi_{:<5}(gcd): {}", kind.name(), row.join(" "));
    }
    for (c, f) in count_functions(3) {
        println!("{c:?}_3(360) = {}", f.value(&[360]));
    }
    let v = named_convolutes(36, 2)?;
    println!("n = 36: a = {}, b = {}, h = {}, g = {}", v.a, v.b, v.h, v.g_r);
    Ok(())
}
