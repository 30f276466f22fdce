//! Three operations exposed to the page in `www/`: a single integration,
//! a reference table, and a transform probe. All return aligned text.

use mellin_quad::numerics::DEFAULT_PRECISION;
use mellin_quad::tables::required_precision;
use mellin_quad_cli::{compute, write_tables, Action, CliError, Format, RunConfig};
use wasm_bindgen::prelude::*;

fn config(
    action: Action,
    function: Option<&str>,
    sigma: Option<f64>,
    precision: usize,
) -> RunConfig {
    RunConfig {
        action,
        function: function.map(str::to_string),
        c: None,
        sigmas: sigma.into_iter().collect(),
        ell: 12,
        precision_bits: precision,
        tol: 1e-20,
        format: Format::Text,
        out: None,
    }
}

fn text(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.sigmas.iter().any(|s| !(*s > 0.0)) {
        return Err(CliError::Validation("sigma must be positive".into()));
    }
    let tables = compute(cfg)?;
    let mut buf = Vec::new();
    write_tables(&tables, cfg.format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("tables are ASCII"))
}

fn js(e: CliError) -> JsError {
    JsError::new(&e.to_string())
}

/// Value, error and bound of the rule for a corpus entry at one `sigma`.
#[wasm_bindgen]
pub fn integrate(function: &str, sigma: f64, precision_bits: usize) -> Result<String, JsError> {
    let cfg = config(
        Action::Integrate { k_max: None },
        Some(function),
        Some(sigma),
        precision_bits.max(64),
    );
    text(&cfg).map_err(js)
}

/// Reference table `id`, at the precision it needs.
#[wasm_bindgen]
pub fn table(id: u8) -> Result<String, JsError> {
    let p = DEFAULT_PRECISION.max(required_precision(id));
    text(&config(Action::Table(id), None, None, p)).map_err(js)
}

/// Numeric transform at `c + iv` against the closed form, if any.
#[wasm_bindgen]
pub fn transform(function: &str, c: f64, v: f64) -> Result<String, JsError> {
    let mut cfg = config(Action::Transform { v: vec![v] }, Some(function), None, 128);
    cfg.c = Some(c);
    cfg.tol = 1e-15;
    text(&cfg).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operations_render() {
        let out = text(&config(
            Action::Integrate { k_max: None },
            Some("sobolev"),
            Some(4.0),
            128,
        ))
        .unwrap();
        assert!(out.contains("6.478229e-05"), "{out}");
        let out = text(&config(Action::Table(1), None, None, 128)).unwrap();
        assert_eq!(out.lines().count(), 18);
        let mut cfg = config(
            Action::Transform { v: vec![1.0] },
            Some("expdecay"),
            None,
            128,
        );
        cfg.tol = 1e-15;
        assert!(text(&cfg).unwrap().contains("v"));
        assert!(text(&config(Action::Table(9), None, None, 128)).is_err());
    }
}
