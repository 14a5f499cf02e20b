use yamabe_glue::config::{key_line, parse_pi_multiple, RunConfig};
use yamabe_glue::geometry::PiMultiple;
use yamabe_glue::rational::{frac, int};
use yamabe_glue::Error;

const PRODUCT: &str = r#"
mode = "product"
order = 5

[sphere]
d = 2
r = "3/2"

[factor2]
dim = 2
volume = "8/3 pi^2"
lambda1 = 4
scalar_curvature = "1/2"
"#;

#[test]
fn toml_round_trip() {
    let run = RunConfig::from_toml(PRODUCT).unwrap();
    let text = toml::to_string(&run).unwrap();
    assert_eq!(RunConfig::from_toml(&text).unwrap(), run);
    let cfg = run.build().unwrap();
    assert_eq!(cfg.sphere.r_sq, frac(9, 4));
    assert_eq!(cfg.n(), 4);
}

#[test]
fn pi_multiples() {
    assert_eq!(parse_pi_multiple("4*pi").unwrap(), PiMultiple { coeff: int(4), pi_power: 1 });
    assert_eq!(parse_pi_multiple("8/3 pi^2").unwrap(), PiMultiple { coeff: frac(8, 3), pi_power: 2 });
    assert_eq!(parse_pi_multiple(" 7 ").unwrap(), PiMultiple::rational(int(7)));
    assert_eq!(parse_pi_multiple("pi").unwrap(), PiMultiple { coeff: int(1), pi_power: 1 });
    assert!(parse_pi_multiple("pi^x").is_err());
}

#[test]
fn yamabe_mode_derives_the_radius() {
    let text = "mode = \"yamabe\"\n[sphere]\nd = 1\n[factor2]\ndim = 2\nsphere_r = 1\n";
    let cfg = RunConfig::from_toml(text).unwrap().build().unwrap();
    assert_eq!(cfg.sphere.r_sq, int(1));
    assert_eq!(cfg.h(), frac(1, 4));

    let wrong = "mode = \"yamabe\"\n[sphere]\nd = 1\nr = 2\n[factor2]\ndim = 2\nsphere_r = 1\n";
    assert!(matches!(RunConfig::from_toml(wrong).unwrap().build(), Err(Error::Config(_))));
}

#[test]
fn custom_mode_requires_h_at_the_kernel_coupling() {
    let base = "[sphere]\nd = 2\nr = 1\n[factor2]\ndim = 2\nsphere_r = \"1/2\"\n";
    // λ₁(S²(1)) = 2 and 2★ - 2 = 2 at n = 4, so h = 1 is the only admissible value.
    let ok = format!("mode = \"custom\"\nh = 1\n{base}");
    assert_eq!(RunConfig::from_toml(&ok).unwrap().build().unwrap().h(), int(1));
    let bad = format!("mode = \"custom\"\nh = \"3/2\"\n{base}");
    let err = RunConfig::from_toml(&bad).unwrap().build().unwrap_err();
    assert!(matches!(err, Error::Hypothesis { .. }), "{err}");
    let missing = format!("mode = \"custom\"\n{base}");
    assert!(RunConfig::from_toml(&missing).unwrap().build().is_err());
    let stray = format!("h = 1\n{base}");
    assert!(RunConfig::from_toml(&stray).unwrap().build().is_err());
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let err = RunConfig::from_toml("mode = \"product\"\n[sphere\nd = 2\n").unwrap_err();
    let Error::Config(msg) = err else { panic!("{err:?}") };
    assert!(msg.starts_with("2:"), "{msg}");
}

#[test]
fn key_lines() {
    assert_eq!(key_line(PRODUCT, "factor2", "lambda1"), Some(12));
    assert_eq!(key_line(PRODUCT, "", "order"), Some(3));
    assert_eq!(key_line(PRODUCT, "sphere", "lambda1"), None);
    let inline = "mode = \"product\"\nfactor2 = { dim = 2, sphere_r = 1 }\n[sphere]\nd = 2\n";
    assert_eq!(key_line(inline, "factor2", "sphere_r"), Some(2));
}

#[test]
fn direction_length_is_checked() {
    let text = format!("direction = [1, \"1/2\"]\n{PRODUCT}");
    let run = RunConfig::from_toml(&text).unwrap();
    let cfg = run.build().unwrap();
    assert!(run.direction(&cfg).is_err());
    let text = format!("direction = [1, \"1/2\", 0]\n{PRODUCT}");
    let run = RunConfig::from_toml(&text).unwrap();
    assert_eq!(run.direction(&cfg).unwrap(), vec![int(1), frac(1, 2), int(0)]);
}
