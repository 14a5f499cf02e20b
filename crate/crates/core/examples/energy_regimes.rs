//! Blow-up regimes and the reduced energy profile `Ψ`.

use yamabe_glue::energy::{energy_report, rate_functions, universal_coefficient};
use yamabe_glue::geometry::{yamabe_product, AbstractFactor};
use yamabe_glue::rational::int;
use yamabe_glue::Result;

fn main() -> Result<()> {
    for n in [3, 6, 10] {
        println!("universal coefficient, n = {n}: {}", universal_coefficient(n));
    }
    for (k, d) in [(2, 1), (4, 2), (5, 3)] {
        let cfg = yamabe_product(&AbstractFactor::round_sphere(k, int(1))?, d)?;
        let report = energy_report(&cfg)?;
        print!("S^{d} × S^{k} (n = {}): {:?}", cfg.n(), report.regime.case);
        match report.profile {
            Some(p) => println!(", F0 = {:.6}, t* = {:.6}, Ψ''(t*) = {:.4}", p.f0, p.t_star, p.psi_second(p.t_star)),
            None => println!(" ({})", report.regime.reason.unwrap_or_default()),
        }
    }
    let rates = rate_functions(6, 0.01)?;
    println!("n = 6, δ = 0.01: ε₁ = {:.3e}, ε₂ = {:.3e}", rates.eps1, rates.eps2);
    Ok(())
}
