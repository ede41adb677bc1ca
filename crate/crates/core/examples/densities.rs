//! Densities of coprimality predicates: Euler products against exact lattice counts.
use mularith::asymptotics::{density_pairwise_unitary_coprime, density_report, DensityPredicate};
use mularith::series::{format_float, EulerConfig};

fn main() -> mularith::Result<()> {
    let cfg = EulerConfig::default().with_primes(100_000);
    for (pred, r, side) in [
        (DensityPredicate::GcdOne, 3, 300),
        (DensityPredicate::PairwiseCoprime, 2, 2000),
        (DensityPredicate::PairwiseCoprime, 3, 200),
        (DensityPredicate::GcudOne, 2, 2000),
        (DensityPredicate::PairwiseUnitaryCoprime, 3, 100),
    ] {
        let rep = density_report(pred, r, side, &cfg)?;
        println!("{:<26} r={r}  analytic {}  B={side} gap {:+.2e}", pred.name(), format_float(&rep.analytic.value, 12), rep.gap);
    }
    let u4 = density_pairwise_unitary_coprime(4, &cfg)?;
    if let Some(ex) = u4.explicit {
        println!("r=4 unitary: Q-sum {} polynomial {}", format_float(&u4.q_sum.value, 15), format_float(&ex.value, 15));
    }
    Ok(())
}
