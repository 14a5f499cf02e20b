//! `I₀` and `J₀` along a ray of glued functions, and the identity relating
//! `I₀` to the ray function `f`.

use yamabe_glue::geometry::{AbstractFactor, PiMultiple, ProductConfig};
use yamabe_glue::obstruction::{RayEvaluation, RayProfile};
use yamabe_glue::rational::int;
use yamabe_glue::spectral::SphereSpec;
use yamabe_glue::Result;

fn main() -> Result<()> {
    let factor = AbstractFactor::new(2, PiMultiple::rational(int(7)), int(3), int(1))?;
    let cfg = ProductConfig::product(SphereSpec::unit(2), factor)?;
    let profile = RayProfile::new(&cfg, &[int(1), int(0), int(0)], 6)?;
    println!("{:>8} {:>14} {:>14} {:>14} {:>10}", "t", "I₀", "J₀", "f", "residual");
    for t in [-0.05, -0.02, 0.0, 0.01, 0.02, 0.05] {
        let r = RayEvaluation::from_profile(&cfg, &profile, t)?;
        println!("{t:>8} {:>14.10} {:>14.10} {:>14.6e} {:>10.1e}", r.i0, r.j0, r.f, r.identity_residual);
    }
    Ok(())
}
