//! The additive map p + q√2 ↦ p is unbounded on every interval: walk the
//! convergents of √2 until the value passes each bound.

use gleason_cauchy::cauchy::{
    check_condition, parse_rational, unboundedness_witness, Condition, QSqrt2Additive, SearchParams,
};

fn main() -> gleason_cauchy::error::Result<()> {
    let f = QSqrt2Additive::from_ints(1, 0);
    let one = parse_rational("1")?;
    for bound in ["10", "1000", "1000000", "1000000000000"] {
        let w = unboundedness_witness(&f, &parse_rational(bound)?, &one)?;
        println!(
            "bound {bound:>14}: x = {:<28} ≈ {:.3e}  f(x) = {}  verified={}",
            w.x.to_string(),
            w.x.to_f64(),
            w.value,
            w.verify(&f)
        );
    }

    let params = SearchParams::new(one).with_epsilon(parse_rational("1/100")?);
    let r = check_condition(&f, Condition::ContinuousAtZero, &params)?;
    println!(
        "continuity at zero on {}: holds={} witness x ≈ {:.3e}",
        r.searched_region,
        r.holds_on_searched_region,
        r.witness.first().map_or(f64::NAN, |w| w.x.to_f64())
    );
    Ok(())
}
