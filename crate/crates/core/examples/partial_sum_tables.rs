//! Exact partial sums against asymptotic main terms.
use mularith::asymptotics::{fit_leading_coefficient, partial_sum_table, table_csv, TableTarget};

fn main() -> mularith::Result<()> {
    print!("{}", table_csv(&partial_sum_table(TableTarget::Gcd2, &[50, 500, 5000])?)?);
    for row in partial_sum_table(TableTarget::L2OverN, &[50, 500, 5000])? {
        println!("l2/n x={:<5} ratio {:.5}", row.x, row.ratio());
    }
    let fit = fit_leading_coefficient(TableTarget::S2, &[250, 500, 750, 1000, 1500, 2000, 3000])?;
    println!("s2 leading coefficient: fitted {:.5} expected {:.5}", fit.fitted, fit.expected);
    Ok(())
}
