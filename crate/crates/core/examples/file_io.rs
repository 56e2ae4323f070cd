// Reading and writing distribution and spec files.

use std::path::Path;

use hpye::io::{load_distribution, load_spec, parse_distribution, serialize_distribution};
use hpye::{evaluate, example1, Error, Result};

pub fn run_example() -> Result<f64> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let omega = load_distribution(data.join("omega.json"))?;
    let spec = load_spec(data.join("power_qaly.json"))?;
    assert_eq!(omega, example1::omega());

    let text = serialize_distribution(&omega);
    assert_eq!(parse_distribution(text.as_bytes())?, omega);

    let bad = br#"{"profiles": [{"state": "11111", "p": 1, "t": "NaN"}]}"#;
    if let Err(e) = parse_distribution(bad) {
        assert!(matches!(e.kind(), Error::NegativeOrNonFiniteLifetime(_)));
        println!("rejected: {e}");
    }

    let value = evaluate(&omega, &spec)?;
    println!("{}: {value}", spec.describe());
    Ok(value)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
