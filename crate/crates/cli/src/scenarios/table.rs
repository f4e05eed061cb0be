//! Strong-coupling feasibility table.

use superatom::models::check_strong_coupling;

use crate::config::{Scenario, ScenarioConfig};
use crate::error::CliResult;
use crate::output::{RunOutput, Table};

pub fn run(cfg: &ScenarioConfig, unit: f64) -> CliResult<RunOutput> {
    let Scenario::StrongCouplingTable { margin } = cfg.scenario else { unreachable!() };
    let r = check_strong_coupling(&cfg.params, margin);
    let mut t = Table::new("strong_coupling", &["term", "value", "g_bar", "ratio", "margin", "pass"]).plot(
        "strong-coupling ratios",
        "term",
        &["ratio"],
        "loss term",
        "√N g / loss",
        "table",
    );
    for term in &r.terms {
        t.push(vec![
            term.name.as_str().into(),
            (term.value / unit).into(),
            (r.g_bar / unit).into(),
            term.ratio.into(),
            margin.into(),
            term.pass.into(),
        ]);
    }
    let min_ratio = r.terms.iter().map(|t| t.ratio).fold(f64::INFINITY, f64::min);
    t.push(vec!["all".into(), f64::NAN.into(), (r.g_bar / unit).into(), min_ratio.into(), margin.into(), r.pass.into()]);
    let mut out = RunOutput::default();
    for n in &r.notes {
        out.warn(n.clone());
    }
    out.set("pass", r.pass);
    out.set("g_bar", r.g_bar / unit);
    out.set("min_ratio", min_ratio);
    out.tables.push(t);
    Ok(out)
}
