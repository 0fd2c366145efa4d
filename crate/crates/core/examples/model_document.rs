//! Serializes a fitted model to the JSON document the CLI writes, reads it
//! back without refitting, and evaluates it with and without extrapolation.
//!
//! ```text
//! cargo run --example model_document
//! ```

use qspline::cli::ModelDocument;
use qspline::{fit, Error, KnotDataSet, QParam};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = KnotDataSet::new(vec![0.0, 0.5, 1.5, 2.0], vec![1.0, 0.2, -0.4, 0.3], 0.0, 1.0)?;
    let model = fit(&data, QParam::new(0.8)?)?;

    let json = ModelDocument::from_model(&model).to_json();
    println!("{json}");

    let restored = ModelDocument::from_json(&json)?.to_model()?;
    assert_eq!(restored, model, "round trip is bit-exact");
    println!("S(1.0) = {}", restored.evaluate(1.0)?);

    match restored.evaluate(2.5) {
        Err(Error::OutOfDomain { x, lo, hi }) => println!("{x} lies outside [{lo}, {hi}]"),
        other => println!("unexpected: {other:?}"),
    }
    println!("extrapolated S(2.5) = {}", restored.evaluate_with(2.5, true)?);
    Ok(())
}
