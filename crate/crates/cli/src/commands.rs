//! Subcommand implementations. Each returns its output instead of printing
//! so the binary stays a thin shell.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use gravwitness_core::analysis::{
    calibrate, cp_gravity_ratio, cp_potential, cp_screening_ratio, find_inflection,
    find_phase_jump, min_visibility, unwrap_phase, CpParams, Model,
};
use gravwitness_core::gravmodel::{evolve, trace_grid};
use gravwitness_core::TraceRow;

use crate::config::{OutputKind, RunConfig};
use crate::csv::{num, trace_csv};
use crate::error::CliError;
use crate::svg::{self, Panel, Series};
use crate::sweep::{run_sweep, SweepResult};

/// Default bracket width for `jump`, in seconds.
pub const DEFAULT_JUMP_TOL: f64 = 1e-9;

/// Default interferometer phase sensitivity for `calibrate`, in radians.
pub const DEFAULT_SENSITIVITY: f64 = 1e-6;

/// Human-readable lines followed by a single machine-readable
/// `key=value ...` summary line.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub lines: Vec<String>,
    pub summary: String,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        writeln!(f, "{}", self.summary)
    }
}

fn header(cfg: &RunConfig) -> Vec<String> {
    let p = &cfg.params;
    let (t0, t1) = cfg.window();
    vec![
        format!(
            "parameters: m0 = {} kg, d = {} m, dx = {} m, T = {} s",
            num(p.m0),
            num(p.d),
            num(p.dx),
            num(p.t_total)
        ),
        format!("convention: {}", p.coupling),
        format!("window: [{}, {}] s", num(t0), num(t1)),
    ]
}

/// All trace rows for the configured window. Rows are evaluated in parallel
/// and collected in grid order.
pub fn compute_trace(cfg: &RunConfig) -> Result<Vec<TraceRow>, CliError> {
    let grid = trace_grid(&cfg.params, cfg.window(), cfg.trace_points)?;
    let rows = grid
        .par_iter()
        .map(|&t| evolve(&cfg.params, t))
        .collect::<gravwitness_core::Result<Vec<_>>>()?;
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct TraceOutput {
    pub rows: Vec<TraceRow>,
    pub csv: Option<String>,
    pub svg: Option<String>,
}

pub fn cmd_trace(cfg: &RunConfig) -> Result<TraceOutput, CliError> {
    let rows = compute_trace(cfg)?;
    let csv = cfg
        .outputs
        .contains(&OutputKind::Csv)
        .then(|| trace_csv(&rows, cfg.unwrap));
    let svg = cfg
        .outputs
        .contains(&OutputKind::Svg)
        .then(|| trace_svg(&rows, cfg));
    Ok(TraceOutput { rows, csv, svg })
}

/// Phase panel and visibility panel; quantum curves solid, semiclassical
/// dashed.
pub fn trace_svg(rows: &[TraceRow], cfg: &RunConfig) -> String {
    let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let series = |label: &str, ys: Vec<f64>, color, dashed| Series {
        label: label.to_string(),
        points: t.iter().copied().zip(ys).collect(),
        color,
        dashed,
    };
    let mut phi_c: Vec<f64> = rows.iter().map(|r| r.phi_c.unwrap_or(f64::NAN)).collect();
    if cfg.unwrap {
        phi_c = unwrap_phase(&phi_c, PI);
    }
    let convention = cfg.params.coupling;
    let phase = Panel {
        title: format!("Pancharatnam phase ({convention})"),
        x_label: "t [s]".into(),
        y_label: "phase [rad]".into(),
        series: vec![
            series(
                "Φ_Q quantum",
                rows.iter().map(|r| r.phi_q.unwrap_or(f64::NAN)).collect(),
                "#1f4fbf",
                false,
            ),
            series(
                if cfg.unwrap {
                    "Φ_C unwrapped"
                } else {
                    "Φ_C semiclassical"
                },
                phi_c,
                "black",
                true,
            ),
        ],
    };
    let visibility = Panel {
        title: format!("Visibility ({convention})"),
        x_label: "t [s]".into(),
        y_label: "visibility".into(),
        series: vec![
            series(
                "quantum, global",
                rows.iter().map(|r| r.vis_q_global).collect(),
                "#1f4fbf",
                false,
            ),
            series(
                "quantum, reduced",
                rows.iter().map(|r| r.vis_q_reduced).collect(),
                "#2a9d8f",
                false,
            ),
            series(
                "semiclassical",
                rows.iter().map(|r| r.vis_c).collect(),
                "black",
                true,
            ),
        ],
    };
    svg::render(&[phase, visibility])
}

pub fn cmd_jump(cfg: &RunConfig, tol: f64) -> Result<Report, CliError> {
    let mut lines = header(cfg);
    lines.push(format!("model: {}", cfg.model));
    let found = find_phase_jump(&cfg.params, cfg.model, cfg.window(), tol)?;
    let tail = format!("model={} convention={}", cfg.model, cfg.params.coupling);
    let summary = match found {
        Some(r) => {
            lines.push(format!(
                "phase jump at t = {} s, bracket [{}, {}] s",
                num(r.t_jump),
                num(r.bracket.0),
                num(r.bracket.1)
            ));
            lines.push(format!("jump magnitude: {} rad", num(r.magnitude)));
            format!(
                "t_jump={} magnitude={} bracket_lo={} bracket_hi={} {tail}",
                num(r.t_jump),
                num(r.magnitude),
                num(r.bracket.0),
                num(r.bracket.1)
            )
        }
        None => {
            lines.push("no phase jump found in window".into());
            format!("jump=none {tail}")
        }
    };
    Ok(Report { lines, summary })
}

pub fn cmd_inflect(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut lines = header(cfg);
    lines.push("model: quantum".into());
    let window = cfg.window();
    let found = find_inflection(&cfg.params, window)?;
    let jump = find_phase_jump(&cfg.params, Model::Semiclassical, window, DEFAULT_JUMP_TOL)?;
    let jump_field = match jump {
        Some(r) => {
            lines.push(format!(
                "semiclassical jump for comparison: t = {} s",
                num(r.t_jump)
            ));
            format!("t_jump_semiclassical={}", num(r.t_jump))
        }
        None => "t_jump_semiclassical=none".into(),
    };
    let summary = match found {
        Some(t) => {
            lines.push(format!("first inflection of Φ_Q at t = {} s", num(t)));
            format!(
                "t_inflection={} {jump_field} convention={}",
                num(t),
                cfg.params.coupling
            )
        }
        None => {
            lines.push("no inflection of Φ_Q found in window".into());
            format!(
                "inflection=none {jump_field} convention={}",
                cfg.params.coupling
            )
        }
    };
    Ok(Report { lines, summary })
}

pub fn cmd_vismin(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut lines = header(cfg);
    lines.push(format!(
        "model: {}, visibility: {}",
        cfg.model, cfg.visibility
    ));
    let m = min_visibility(&cfg.params, cfg.model, cfg.visibility, cfg.window())?;
    lines.push(format!(
        "minimum visibility {} at t = {} s",
        num(m.v_min),
        num(m.t_min)
    ));
    if m.coarse {
        lines.push("visibility not unimodal in window; grid minimum reported".into());
    }
    let summary = format!(
        "t_min={} v_min={} coarse={} model={} visibility={} convention={}",
        num(m.t_min),
        num(m.v_min),
        m.coarse,
        cfg.model,
        cfg.visibility,
        cfg.params.coupling
    );
    Ok(Report { lines, summary })
}

pub fn cmd_calibrate(cfg: &RunConfig, sensitivity: f64) -> Result<Report, CliError> {
    let mut lines = header(cfg);
    let r = calibrate(&cfg.params, sensitivity)?;
    lines.push(format!(
        "gravitational phase over T: {} rad",
        num(r.delta_phi)
    ));
    lines.push(format!("bias working point: {} rad", num(r.working_point)));
    lines.push(format!(
        "sensitivity {} rad: {}",
        num(sensitivity),
        if r.detectable {
            "detectable"
        } else {
            "not detectable"
        }
    ));
    lines.push(format!(
        "smallest detectable mass: m0 = {} kg (m = {} kg)",
        num(r.min_m0),
        num(2.0 * r.min_m0)
    ));
    let summary = format!(
        "delta_phi={} sensitivity={} detectable={} min_m0={} min_m={} working_point={} convention={}",
        num(r.delta_phi),
        num(sensitivity),
        r.detectable,
        num(r.min_m0),
        num(2.0 * r.min_m0),
        num(r.working_point),
        cfg.params.coupling
    );
    Ok(Report { lines, summary })
}

pub fn cmd_cp(
    cfg: &RunConfig,
    radius: f64,
    epsilon: f64,
    reference_epsilon: Option<f64>,
) -> Result<Report, CliError> {
    let cp = CpParams {
        radius,
        d: cfg.params.d,
        epsilon,
        c: cfg.params.c,
        hbar: cfg.params.hbar,
    };
    let potential = cp_potential(&cp)?;
    let ratio = cp_gravity_ratio(&cp, &cfg.params)?;
    let mut lines = vec![
        format!(
            "spheres: R = {} m, d = {} m, epsilon = {}",
            num(radius),
            num(cp.d),
            num(epsilon)
        ),
        format!(
            "Casimir-Polder estimate: V_cp = {} (order of magnitude)",
            num(potential)
        ),
        format!("|V_cp| / (G m0^2 / d) = {} (estimate)", num(ratio)),
    ];
    let mut summary = format!(
        "V_cp={} cp_gravity_ratio={} R={} d={} epsilon={} estimate=true",
        num(potential),
        num(ratio),
        num(radius),
        num(cp.d),
        num(epsilon)
    );
    if let Some(reference) = reference_epsilon {
        CpParams {
            epsilon: reference,
            ..cp
        }
        .validate()?;
        let screening = cp_screening_ratio(epsilon, reference);
        lines.push(format!(
            "V_cp(epsilon = {}) / V_cp(epsilon = {}) = {}",
            num(epsilon),
            num(reference),
            num(screening)
        ));
        summary.push_str(&format!(
            " reference_epsilon={} screening_ratio={}",
            num(reference),
            num(screening)
        ));
    }
    Ok(Report { lines, summary })
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<SweepResult, CliError> {
    let axis = cfg.sweep.ok_or_else(|| {
        CliError::Usage(
            "sweep needs an axis: set sweep_param, sweep_start, sweep_stop (and sweep_count)"
                .into(),
        )
    })?;
    Ok(run_sweep(cfg, axis))
}
