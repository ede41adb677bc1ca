//! Definitional sums against their closed representations.
use mularith::catalog::{entries_of_arity, entry};

fn main() -> mularith::Result<()> {
    let point = [12, 18];
    for e in entries_of_arity(2) {
        let (def, rep) = e.routes(&point);
        match rep {
            Some(rep) => println!("{:<12} {:?}: {def} = {rep} ({:?})", e.name, point, e.class),
            None => println!("{:<12} {:?}: {def}", e.name, point),
        }
    }
    let rho3 = entry("rho", 3, None)?;
    println!("rho(4, 6, 9) both routes: {:?}", rho3.routes(&[4, 6, 9]));
    Ok(())
}
