//! Bell series at a prime and the product rule.
use mularith::catalog::function;
use mularith::convolution::{convolve, ConvolutionKind};
use mularith::series::{bell_multiply, bell_series};

fn main() -> mularith::Result<()> {
    let (f, g) = (function("gcd", 2, None)?, function("sigma_r", 2, None)?);
    let bf = bell_series(&f, 2, 3)?;
    println!("gcd at p = 2:\n{bf}");
    let lhs = bell_series(&convolve(ConvolutionKind::Dirichlet, &f, &g)?, 2, 3)?;
    let rhs = bell_multiply(&bf, &bell_series(&g, 2, 3)?)?;
    println!("product rule to degree 3: {}", lhs == rhs);
    Ok(())
}
