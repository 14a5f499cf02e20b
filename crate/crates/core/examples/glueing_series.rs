//! The glueing series `P_L` along a kernel direction of `S²(1) × N²` and
//! the decay of its terms.

use yamabe_glue::geometry::{AbstractFactor, PiMultiple, ProductConfig};
use yamabe_glue::rational::{frac, int};
use yamabe_glue::series::{glueing_eval, glueing_residual};
use yamabe_glue::spectral::SphereSpec;
use yamabe_glue::Result;

fn main() -> Result<()> {
    let factor = AbstractFactor::new(2, PiMultiple::rational(int(7)), int(3), int(1))?;
    let cfg = ProductConfig::product(SphereSpec::unit(2), factor)?;
    let dir = [int(1), frac(1, 2), int(0)];

    let glue = glueing_eval(&cfg, &dir, 5)?;
    for l in 1..=5u32 {
        println!("R_{l} = {:?}", glue.series.shape(l).components().map(|(k, p)| format!("[{k}] {p}")).collect::<Vec<_>>());
    }
    println!("‖P_L‖: {:?}", glue.norm_decay);

    // The projected residual of the truncated series drops by 2^{L+1} when σ halves.
    let a = glueing_residual(&cfg, &dir, 4, &frac(1, 40))?;
    let b = glueing_residual(&cfg, &dir, 4, &frac(1, 80))?;
    println!("residual ratio at L = 4: {:.3} (expect ≈ 32)", a / b);
    Ok(())
}
