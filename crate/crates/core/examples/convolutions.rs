//! The five convolutions of two-variable functions, their identities, Mobius functions and inverses.
use mularith::catalog::function;
use mularith::convolution::{convolve, identity, inverse, mobius, ConvolutionKind};

fn main() -> mularith::Result<()> {
    let (gcd, one) = (function("gcd", 2, None)?, function("one", 2, None)?);
    for kind in ConvolutionKind::ALL {
        let h = convolve(kind, &gcd, &one)?;
        let mu = mobius(kind, 2);
        let back = convolve(kind, &one, &mu)?;
        println!(
            "{:<5} (gcd * 1)(4, 6) = {:<4} mu(4, 6) = {:<3} (1 * mu) = delta on [1,6]^2: {}",
            kind.name(),
            h.eval(&[4, 6])?,
            mu.eval(&[4, 6])?,
            mularith::arith::first_disagreement(&back, &identity(2), 6)?.is_none()
        );
    }
    let inv = inverse(ConvolutionKind::Dirichlet, &gcd, 12)?;
    println!("Dirichlet inverse of gcd at (4, 8): {}", inv.eval(&[4, 8])?);
    Ok(())
}
