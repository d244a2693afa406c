use rayon::prelude::*;

use qberry_core::analytic::{
    adiabatic_ratio_bound, berry_phase, level_energy, mixed_state_phase, resonant_adiabatic_ratio, sector_cos,
    sector_eigensystem, splitting, two_mode_berry_phase,
};
use qberry_core::geomphase::{
    adiabatic_ratio_numeric, berry_loop_phase, circular_distance, connection_integral, mixed_phase_numeric,
    two_mode_loop_phase,
};
use qberry_core::linalg::eigh;
use qberry_core::model::{build_hamiltonian, extract_sector};
use qberry_core::{LevelId, LoopSpec, ModelParams, Sector, SectorLabel};

use crate::args::{
    AdiabaticArgs, BerryArgs, BerryMode, Command, Figure1Args, LevelArgs, MixedArgs, ModelArgs, SpectrumArgs,
    TwoModeArgs,
};
use crate::output::{Cell, Table};
use crate::sweep::{SweepSpec, SweepVar};
use crate::CliError;

/// Agreement required for the mixed-state match column.
pub const MIXED_MATCH_TOL: f64 = 1e-5;
/// Adiabaticity ratio below which transport counts as adiabatic.
pub const ADIABATIC_THRESHOLD: f64 = 0.1;
/// Grid used by `figure1` when no sweep is given.
pub const FIGURE1_SWEEP: &str = "jc:0:5:51";

/// One grid point of a computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub params: ModelParams,
    pub n: usize,
    pub nprime: usize,
    pub theta: f64,
}

impl Point {
    fn from_model(m: &ModelArgs) -> Result<Self, CliError> {
        let params = ModelParams::new(m.omega, m.nu, m.coupling, m.jc)?;
        Ok(Self { params, n: m.n, nprime: 0, theta: 0.0 })
    }

    fn with(mut self, var: SweepVar, x: f64) -> Self {
        match var {
            SweepVar::Jc => self.params.j_c = x,
            SweepVar::Omega => self.params.omega = x,
            SweepVar::Nu => self.params.nu = x,
            SweepVar::N => self.n = x.round() as usize,
            SweepVar::Theta => self.theta = x,
        }
        self
    }
}

pub fn execute(command: &Command) -> Result<Table, CliError> {
    match command {
        Command::Spectrum(a) => spectrum(a),
        Command::Berry(a) => berry(a),
        Command::Figure1(a) => figure1(a),
        Command::TwoMode(a) => two_mode(a),
        Command::Mixed(a) => mixed(a),
        Command::Adiabatic(a) => adiabatic(a),
    }
}

const SINGLE_MODE_VARS: &[SweepVar] = &[SweepVar::Jc, SweepVar::Omega, SweepVar::Nu, SweepVar::N];

/// Evaluates `eval` at the base point or across the sweep, in parallel,
/// keeping rows in grid order. Swept tables gain a leading column named
/// after the variable.
fn evaluate<F>(
    base: Point,
    sweep: Option<&SweepSpec>,
    allowed: &[SweepVar],
    columns: &[&str],
    eval: F,
) -> Result<Table, CliError>
where
    F: Fn(&Point) -> Result<Vec<Vec<Cell>>, CliError> + Sync,
{
    let Some(sweep) = sweep else {
        let mut table = Table::new(columns);
        for row in eval(&base)? {
            table.push(row);
        }
        return Ok(table);
    };
    if !allowed.contains(&sweep.variable) {
        return Err(CliError::Usage(format!("this command cannot sweep '{}'", sweep.variable.column())));
    }
    let lead = sweep.variable.column();
    let mut header = vec![lead];
    header.extend_from_slice(columns);
    let mut table = Table::new(&header);

    let values = sweep.values();
    let results: Vec<Result<Vec<Vec<Cell>>, CliError>> =
        values.par_iter().map(|&x| eval(&base.with(sweep.variable, x))).collect();
    for (x, rows) in values.iter().zip(results) {
        let key = if sweep.variable == SweepVar::N { Cell::Int(x.round() as i64) } else { Cell::Real(*x) };
        for row in rows? {
            let mut full = vec![key];
            full.extend(row);
            table.push(full);
        }
    }
    Ok(table)
}

fn levels(args: &LevelArgs) -> Vec<LevelId> {
    if args.all_levels {
        LevelId::ALL.to_vec()
    } else {
        vec![LevelId::from_number(args.level).expect("clap restricts --level to 1..=4")]
    }
}

fn level_cell(level: LevelId) -> Cell {
    Cell::Int(i64::from(level.number()))
}

fn loop_spec(steps: usize) -> Result<LoopSpec, CliError> {
    Ok(LoopSpec::new(steps)?)
}

pub const SPECTRUM_COLUMNS: &[&str] = &["level", "E_analytic", "E_numeric", "abs_diff"];

fn spectrum(a: &SpectrumArgs) -> Result<Table, CliError> {
    let cutoff = a.model.cutoff;
    evaluate(Point::from_model(&a.model)?, a.output.sweep.as_ref(), SINGLE_MODE_VARS, SPECTRUM_COLUMNS, |pt| {
        let h = build_hamiltonian(&pt.params, cutoff)?;
        let mut rows = Vec::with_capacity(4);
        for sector in [Sector::Alpha, Sector::Beta] {
            let block = extract_sector(&h, SectorLabel::new(sector, pt.n))?;
            let numeric = eigh(&block)?;
            for level in LevelId::ALL.into_iter().filter(|l| l.sector() == sector) {
                let exact = level_energy(&pt.params, pt.n, level)?;
                let found = numeric.values[usize::from(level.is_upper())];
                rows.push(vec![
                    level_cell(level),
                    Cell::Real(exact),
                    Cell::Real(found),
                    Cell::Real((exact - found).abs()),
                ]);
            }
        }
        Ok(rows)
    })
}

pub const BERRY_COLUMNS: &[&str] = &[
    "level",
    "gamma_analytic_total",
    "gamma_numeric_total",
    "gamma_reduced",
    "winding",
    "min_gap",
    "abs_diff",
    "method",
];

fn berry(a: &BerryArgs) -> Result<Table, CliError> {
    let spec = loop_spec(a.steps)?;
    let cutoff = a.model.cutoff;
    let methods: &[BerryMode] = match a.mode {
        BerryMode::All => &[BerryMode::Analytic, BerryMode::Wilson, BerryMode::Connection],
        BerryMode::Analytic => &[BerryMode::Analytic],
        BerryMode::Wilson => &[BerryMode::Wilson],
        BerryMode::Connection => &[BerryMode::Connection],
    };
    let levels = levels(&a.level);
    evaluate(Point::from_model(&a.model)?, a.output.sweep.as_ref(), SINGLE_MODE_VARS, BERRY_COLUMNS, |pt| {
        let mut rows = Vec::new();
        for &level in &levels {
            let exact = berry_phase(&pt.params, pt.n, level)?;
            for &method in methods {
                let (total, reduced, winding, gap, code) = match method {
                    BerryMode::Analytic => {
                        let gap = splitting(&pt.params, level.sector(), pt.n);
                        (exact.total, exact.reduced, exact.winding, gap, 0)
                    }
                    BerryMode::Wilson | BerryMode::Connection => {
                        let r = if method == BerryMode::Wilson {
                            berry_loop_phase(&pt.params, pt.n, level, &spec, cutoff)?
                        } else {
                            connection_integral(&pt.params, pt.n, level, &spec, cutoff)?
                        };
                        let code = if method == BerryMode::Wilson { 1 } else { 2 };
                        (r.total_phase, r.reduced_phase, r.winding, r.min_gap, code)
                    }
                    BerryMode::All => unreachable!("expanded above"),
                };
                rows.push(vec![
                    level_cell(level),
                    Cell::Real(exact.total),
                    Cell::Real(total),
                    Cell::Real(reduced),
                    Cell::Int(winding),
                    Cell::Real(gap),
                    Cell::Real((total - exact.total).abs()),
                    Cell::Int(code),
                ]);
            }
        }
        Ok(rows)
    })
}

pub const FIGURE1_COLUMNS: &[&str] = &["J", "n", "cos_alpha", "cos_beta"];

/// One curve per photon number (in the order given), each over the J grid.
fn figure1(a: &Figure1Args) -> Result<Table, CliError> {
    let sweep = match &a.output.sweep {
        Some(s) => *s,
        None => FIGURE1_SWEEP.parse().map_err(CliError::Usage)?,
    };
    if sweep.variable != SweepVar::Jc {
        return Err(CliError::Usage(format!("figure1 sweeps jc, not '{}'", sweep.variable.column())));
    }
    if a.n_values.is_empty() {
        return Err(CliError::Usage("figure1 needs at least one photon number".into()));
    }
    let base = Point::from_model(&a.model)?;
    let grid: Vec<(usize, f64)> =
        a.n_values.iter().flat_map(|&n| sweep.values().into_iter().map(move |j| (n, j))).collect();
    let rows: Vec<Result<Vec<Cell>, CliError>> = grid
        .par_iter()
        .map(|&(n, j)| {
            let p = base.with(SweepVar::Jc, j).params;
            let ca = sector_cos(&p, Sector::Alpha, n)?;
            let cb = sector_cos(&p, Sector::Beta, n)?;
            Ok(vec![Cell::Real(j), Cell::Int(n as i64), Cell::Real(ca), Cell::Real(cb)])
        })
        .collect();
    let mut table = Table::new(FIGURE1_COLUMNS);
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

pub const TWO_MODE_COLUMNS: &[&str] = &["level", "gamma_analytic", "gamma_numeric_reduced", "abs_diff_mod_2pi"];

fn two_mode(a: &TwoModeArgs) -> Result<Table, CliError> {
    if !a.theta.is_finite() {
        return Err(CliError::Usage(format!("theta must be finite, got {}", a.theta)));
    }
    let steps = a.steps;
    loop_spec(steps)?;
    let cutoff = a.model.cutoff;
    let levels = levels(&a.level);
    let mut base = Point::from_model(&a.model)?;
    base.nprime = a.nprime;
    base.theta = a.theta;
    let allowed = [SweepVar::Jc, SweepVar::Omega, SweepVar::Nu, SweepVar::N, SweepVar::Theta];
    evaluate(base, a.output.sweep.as_ref(), &allowed, TWO_MODE_COLUMNS, |pt| {
        let spec = LoopSpec::two_mode(pt.theta).with_steps(steps);
        let mut rows = Vec::new();
        for &level in &levels {
            let exact = two_mode_berry_phase(&pt.params, pt.n, pt.nprime, pt.theta, level)?;
            let r = two_mode_loop_phase(&pt.params, pt.n, pt.nprime, pt.theta, level, &spec, cutoff)?;
            rows.push(vec![
                level_cell(level),
                Cell::Real(exact),
                Cell::Real(r.reduced_phase),
                Cell::Real(circular_distance(r.reduced_phase, exact)),
            ]);
        }
        Ok(rows)
    })
}

pub const MIXED_COLUMNS: &[&str] =
    &["level", "gamma_paper", "gamma_numeric", "gamma_interferometric", "match_mod_2pi_up_to_sign"];

fn mixed(a: &MixedArgs) -> Result<Table, CliError> {
    let spec = loop_spec(a.steps)?;
    let cutoff = a.model.cutoff;
    let levels = levels(&a.level);
    evaluate(Point::from_model(&a.model)?, a.output.sweep.as_ref(), SINGLE_MODE_VARS, MIXED_COLUMNS, |pt| {
        let mut rows = Vec::new();
        for &level in &levels {
            let quoted = mixed_state_phase(&pt.params, pt.n, level)?.reduced;
            let r = mixed_phase_numeric(&pt.params, pt.n, level, &spec, cutoff)?;
            let numeric = r.holonomy.reduced_phase;
            let distance = circular_distance(numeric, quoted).min(circular_distance(-numeric, quoted));
            rows.push(vec![
                level_cell(level),
                Cell::Real(quoted),
                Cell::Real(numeric),
                Cell::Real(r.interferometric_phase),
                Cell::Bool(distance < MIXED_MATCH_TOL),
            ]);
        }
        Ok(rows)
    })
}

pub const ADIABATIC_COLUMNS: &[&str] = &["ratio_analytic", "ratio_numeric", "resonant_bound", "satisfied"];

fn adiabatic(a: &AdiabaticArgs) -> Result<Table, CliError> {
    let cutoff = a.model.cutoff;
    let (omega_prec, fd_step) = (a.omega_prec, a.fd_step);
    evaluate(Point::from_model(&a.model)?, a.output.sweep.as_ref(), SINGLE_MODE_VARS, ADIABATIC_COLUMNS, |pt| {
        // reject a degenerate sector before differentiating its eigenvectors
        for sector in [Sector::Alpha, Sector::Beta] {
            sector_eigensystem(&pt.params, pt.n, sector)?;
        }
        let exact = adiabatic_ratio_bound(&pt.params, pt.n, omega_prec)?;
        let numeric = adiabatic_ratio_numeric(&pt.params, pt.n, omega_prec, fd_step, cutoff)?;
        let bound = resonant_adiabatic_ratio(pt.params.lambda_c, pt.n, omega_prec);
        Ok(vec![vec![
            Cell::Real(exact),
            Cell::Real(numeric),
            Cell::Real(bound),
            Cell::Bool(exact.max(numeric) < ADIABATIC_THRESHOLD),
        ]])
    })
}
