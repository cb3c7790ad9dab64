//! On a rational grid, additivity alone pins the function to a line; the
//! extension to the real line keeps that line and is odd.

use gleason_cauchy::cauchy::{
    check_linear, grid_from_unit, parse_rational, ExtensionBase, ExtensionView, QSqrt2,
};
use num_bigint::BigInt;

fn main() -> gleason_cauchy::error::Result<()> {
    let a = parse_rational("3/2")?;
    let g = grid_from_unit(a, 12, parse_rational("-5/7")?)?;
    let lin = check_linear(&g)?;
    println!(
        "grid N = {}: linear={} slope f(a)/a = {}",
        g.n(),
        lin.is_linear,
        lin.slope
    );

    let mut tampered = g.clone();
    tampered.values_mut()[5] += parse_rational("1/1000")?;
    println!("tampered table: {}", check_linear(&tampered).unwrap_err());

    let view = ExtensionView::new(ExtensionBase::Grid(g))?;
    for x in ["9/8", "21/4", "-21/4", "100"] {
        let v = view.f_real(&QSqrt2::rational(parse_rational(x)?))?;
        println!(
            "f({x:>6}) = {:>10}  via n = {}{}",
            v.value.to_string(),
            v.modulus,
            if v.reflected { " (reflected)" } else { "" }
        );
    }

    let x = QSqrt2::rational(parse_rational("21/4")?);
    for n in [7u64, 14, 42] {
        println!(
            "n = {n:>2}: n·f(x/n) = {}",
            view.f_plus_with_modulus(&x, &BigInt::from(n))?
        );
    }
    Ok(())
}
