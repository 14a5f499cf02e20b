//! Obstruction forms on the kernel and the minimizer verdict.

use yamabe_glue::geometry::{yamabe_product, AbstractFactor, ProductConfig};
use yamabe_glue::obstruction::{a3_form, a4_eval, a4_form, classify_minimizer};
use yamabe_glue::rational::{frac, int};
use yamabe_glue::Result;

fn main() -> Result<()> {
    let cfg = yamabe_product(&AbstractFactor::round_sphere(2, int(1))?, 1)?;
    println!("A₃ ≡ 0: {}", a3_form(&cfg)?.is_zero());

    let paths = a4_eval(&cfg, &[int(1), frac(1, 3)])?;
    println!(
        "A₄ direct {} | rewrite {} | closed form {} | series {} (exact parts {:?})",
        paths.direct,
        paths.constant_rewrite,
        paths.closed_form,
        paths.from_series,
        paths.exact.iter().map(|k| k.to_string()).collect::<Vec<_>>()
    );

    let form = a4_form(&cfg)?;
    let closed = form.minimize_closed_form().expect("sphere-factor kernel");
    let numeric = form.minimize_numeric(42);
    println!("min A₄ on the unit sphere: {} (numeric {})", closed.value, numeric.value);

    for (name, cfg) in [("S¹×S² Yamabe", cfg.clone()), ("round S⁴", ProductConfig::pure_sphere(4, int(1))?)] {
        let report = classify_minimizer(&cfg, 6, 0)?;
        println!("{name}: {:?}", report.verdict);
    }
    Ok(())
}
