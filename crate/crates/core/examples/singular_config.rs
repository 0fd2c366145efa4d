//! Not every (knots, q) pair yields a solvable moment system. On the knots
//! 1, 2 with q = 1/2 the first q-shifted entry vanishes and the system is
//! singular; the fit reports that instead of returning garbage.
//!
//! ```text
//! cargo run --example singular_config
//! ```

use qspline::spline::{assemble_system, h_hat};
use qspline::{fit, Error, KnotDataSet, QParam};

fn main() -> qspline::Result<()> {
    let data = KnotDataSet::new(vec![1.0, 2.0], vec![0.0, 1.0], 0.0, 0.0)?;
    for q in [0.5, 0.6, 1.0] {
        let q = QParam::new(q)?;
        let system = assemble_system(&data, q);
        println!(
            "q = {}: h_hat = {:.4}, main {:?}, sub {:?}, super {:?}",
            q.get(),
            h_hat(data.knots(), 1, q),
            system.main(),
            system.sub(),
            system.sup()
        );
        match fit(&data, q) {
            Ok(model) => println!("  fitted, moments {:?}", model.moments().as_slice()),
            Err(e @ Error::SingularSystem { .. }) => println!("  {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
