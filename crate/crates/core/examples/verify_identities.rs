//! Every registered identity, checked exhaustively on a small box.
use mularith::identities::{verify_identity, IDENTITIES};

fn main() -> mularith::Result<()> {
    for (name, statement) in IDENTITIES {
        let rep = verify_identity(name, 2, 12)?;
        println!("{} {name:<32} {statement}", if rep.pass { "ok  " } else { "FAIL" });
    }
    Ok(())
}
