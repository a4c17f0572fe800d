use crate::config::RunConfig;
use hypres::asymptotics::bp_total;
use hypres::legendre::{leg_p_scaled, leg_q_scaled, LegValue};
use hypres::resonances::{
    background_multiplicity, build_set_with, count_n0, count_np, net_of_background, SearchTolerances,
};
use hypres::scattering::{phase_sigma, relcount_check, weyl_fit};
use hypres::C64;
use serde_json::{json, Value};

/// Tabular result of a subcommand plus free-form summary fields.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Value,
}

fn num(x: f64) -> Value {
    // serde_json maps non-finite floats to null
    json!(x)
}

pub fn resonances(cfg: &RunConfig) -> hypres::Result<Table> {
    let model = cfg.model_spec();
    let tol = SearchTolerances { newton_tol: cfg.tol, ..SearchTolerances::default() };
    let set = build_set_with(&model, cfg.tmax, &tol)?;
    let entries = if cfg.with_background { set.entries.clone() } else { net_of_background(&set) };
    let rows = entries
        .iter()
        .map(|r| vec![num(r.s.re), num(r.s.im), json!(r.l), json!(r.local_order), json!(r.weight)])
        .collect();
    Ok(Table {
        columns: vec!["re_s", "im_s", "l", "local_order", "weight"],
        rows,
        summary: json!({
            "search_radius": set.search_radius,
            "l_max": set.l_max,
            "listed": entries.len(),
            "found": set.entries.len(),
            "n_p": count_np(&set, cfg.tmax)?,
            "n_0": count_n0(model.n, cfg.tmax),
            "tolerances": {
                "newton_tol": set.tolerances.newton_tol,
                "residual_tol": set.tolerances.residual_tol,
                "min_box": set.tolerances.min_box,
                "snap_tol": set.tolerances.snap_tol,
                "l_cap": set.tolerances.l_cap,
            },
        }),
    })
}

pub fn counting(cfg: &RunConfig) -> hypres::Result<Table> {
    let model = cfg.model_spec();
    let tol = SearchTolerances { newton_tol: cfg.tol, ..SearchTolerances::default() };
    let set = build_set_with(&model, cfg.tmax, &tol)?;
    let h = model.half_n();
    let steps = (cfg.tmax / cfg.t_step).round() as usize;
    let mut grid: Vec<f64> = (0..=steps).map(|i| (i as f64 * cfg.t_step).min(cfg.tmax)).collect();
    // every jump of N_P and N_0 is a sample point
    grid.extend(set.entries.iter().map(|r| (r.s - h).norm()).filter(|d| *d <= cfg.tmax));
    if model.n % 2 == 1 {
        grid.extend((0..).map(|k| k as f64 + h).take_while(|d| *d <= cfg.tmax));
    }
    grid.push(cfg.tmax);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        rows.push(vec![num(t), json!(count_np(&set, t)?), json!(count_n0(model.n, t))]);
    }
    let background: u64 = (0..).take_while(|k| *k as f64 + h <= cfg.tmax).map(|k| background_multiplicity(model.n, k)).sum();
    Ok(Table {
        columns: vec!["t", "N_P", "N0"],
        rows,
        summary: json!({ "search_radius": set.search_radius, "l_max": set.l_max, "n_0_at_tmax": background }),
    })
}

pub fn constants(cfg: &RunConfig) -> hypres::Result<Table> {
    let c = bp_total(&cfg.model_spec())?;
    Ok(Table {
        columns: vec!["n", "r0", "b0", "b1", "b2", "bp", "b2_error"],
        rows: vec![vec![json!(c.n), num(c.r0), num(c.b0), num(c.b1), num(c.b2), num(c.bp), num(c.quadrature_error)]],
        summary: json!({}),
    })
}

pub fn phase(cfg: &RunConfig) -> hypres::Result<Table> {
    let model = cfg.model_spec();
    let trace = phase_sigma(&model, cfg.xi_max, cfg.xi_step)?;
    let rows = trace.xi_grid.iter().zip(&trace.sigma).map(|(x, s)| vec![num(*x), num(*s)]).collect();
    // sigma grows like xi^{n+1}; the quadratic fit is meaningful for n = 1
    let (lo, hi) = (0.5 * cfg.xi_max, cfg.xi_max);
    let fit = if model.n == 1 {
        match weyl_fit(&trace, lo, hi) {
            Ok(f) => json!({
                "xi_lo": lo,
                "xi_hi": hi,
                "coefficient": f.coefficient,
                "std_error": f.std_error,
                "ci95": [f.coefficient - 1.96 * f.std_error, f.coefficient + 1.96 * f.std_error],
                "samples": f.samples,
            }),
            Err(_) => Value::Null,
        }
    } else {
        Value::Null
    };
    Ok(Table {
        columns: vec!["xi", "sigma"],
        rows,
        summary: json!({ "l_max": trace.l_max, "branch_steps": trace.branch_steps, "fit": fit }),
    })
}

pub fn relcount(cfg: &RunConfig) -> hypres::Result<Table> {
    let r = relcount_check(&cfg.model_spec(), cfg.a)?;
    Ok(Table {
        columns: vec!["a", "lhs", "rhs_phase_term", "rhs_tau_term", "defect"],
        rows: vec![vec![num(r.a), num(r.lhs), num(r.rhs_phase_term), num(r.rhs_tau_term), num(r.defect)]],
        summary: json!({}),
    })
}

fn leg_row(name: &str, v: &LegValue) -> Vec<Value> {
    let val = v.value.to_c64();
    let der = v.deriv.to_c64();
    vec![
        json!(name),
        num(val.re),
        num(val.im),
        num(v.value.ln_abs()),
        num(v.value.arg()),
        num(der.re),
        num(der.im),
        json!(format!("{:?}", v.method)),
        num(v.loss),
    ]
}

pub fn legendre_eval(cfg: &RunConfig) -> hypres::Result<Table> {
    let nu = C64::new(cfg.nu_re, cfg.nu_im);
    let p = leg_p_scaled(cfg.mu, nu, cfg.z)?;
    let q = leg_q_scaled(cfg.mu, nu, cfg.z)?;
    Ok(Table {
        columns: vec!["function", "re", "im", "ln_abs", "arg", "deriv_re", "deriv_im", "method", "loss"],
        rows: vec![leg_row("P^-mu_nu", &p), leg_row("Q^mu_nu", &q)],
        summary: json!({}),
    })
}
