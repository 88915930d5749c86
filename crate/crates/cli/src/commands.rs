//! One function per subcommand; each returns its payload, verdict and,
//! where it has one, a CSV table.

use std::f64::consts::SQRT_2;

use serde::Serialize;
use serde_json::{json, Value};
use spherepack::axis::{self, KernelConvention};
use spherepack::cohn_elkies::{self, E8_DENSITY};
use spherepack::forms::{self, FormId, Forms, HalfPlanePoint};
use spherepack::lattice::{self, DIM};
use spherepack::magic::{tabulate_radial, Magic, TableKind};
use spherepack::packing::{self, LatticeKind, PeriodicPackingSpec};

use crate::args::{
    AxisCommand, Command, ConventionArg, FormsCommand, LatticeArg, LatticeCommand, MagicCommand,
    PackingCommand, WhichArg,
};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{g17, Table};

pub struct Outcome {
    pub results: Value,
    pub pass: bool,
    pub table: Option<Table>,
}

impl Outcome {
    fn new(results: impl Serialize, pass: bool) -> Result<Self, CliError> {
        Ok(Outcome {
            results: serde_json::to_value(results).map_err(|e| CliError::Output(e.to_string()))?,
            pass,
            table: None,
        })
    }

    fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

/// `"forms identities"` and so on.
pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Forms(FormsCommand::Eval { .. }) => "forms eval",
        Command::Forms(FormsCommand::Identities { .. }) => "forms identities",
        Command::Lattice(LatticeCommand::Shells { .. }) => "lattice shells",
        Command::Lattice(LatticeCommand::Decode { .. }) => "lattice decode",
        Command::Lattice(LatticeCommand::Info) => "lattice info",
        Command::Packing(PackingCommand::Density { .. }) => "packing density",
        Command::Packing(PackingCommand::Mc { .. }) => "packing mc",
        Command::Magic(MagicCommand::Eval { .. }) => "magic eval",
        Command::Magic(MagicCommand::Table { .. }) => "magic table",
        Command::Magic(MagicCommand::Verify) => "magic verify",
        Command::Bound => "bound",
        Command::Axis(AxisCommand::Check { .. }) => "axis check",
    }
}

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let owned;
    let forms: &Forms = if cfg.forms_config() == *Forms::standard().config() {
        Forms::standard()
    } else {
        owned = Forms::new(cfg.forms_config())?;
        &owned
    };
    match cmd {
        Command::Forms(FormsCommand::Eval { form, re, im }) => forms_eval(form, *re, *im, forms),
        Command::Forms(FormsCommand::Identities { order }) => {
            forms_identities(order.unwrap_or(cfg.series_order), forms)
        }
        Command::Lattice(LatticeCommand::Shells { max_norm2 }) => lattice_shells(*max_norm2),
        Command::Lattice(LatticeCommand::Decode { point }) => lattice_decode(point),
        Command::Lattice(LatticeCommand::Info) => lattice_info(),
        Command::Packing(PackingCommand::Density { lattice }) => packing_density(*lattice),
        Command::Packing(PackingCommand::Mc {
            lattice,
            radius,
            samples,
        }) => packing_mc(*lattice, *radius, *samples, cfg.seed),
        Command::Magic(sub) => {
            let magic = Magic::new(cfg.quadrature, forms)?;
            match sub {
                MagicCommand::Eval { r } => magic_eval(*r, &magic),
                MagicCommand::Table { which } => magic_table(*which, cfg, &magic),
                MagicCommand::Verify => magic_verify(cfg, &magic),
            }
        }
        Command::Bound => bound(&Magic::new(cfg.quadrature, forms)?),
        Command::Axis(AxisCommand::Check { convention }) => axis_check(*convention, cfg, forms),
    }
}

fn forms_eval(name: &str, re: f64, im: f64, forms: &Forms) -> Result<Outcome, CliError> {
    let form = FormId::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = FormId::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!("unknown form {name:?}; expected one of {}", known.join(", ")))
    })?;
    let v = forms.eval(form, HalfPlanePoint::new(re, im)?)?;
    Outcome::new(
        json!({
            "form": form.name(),
            "tau": {"re": re, "im": im},
            "value": {"re": v.re, "im": v.im},
        }),
        true,
    )
}

fn forms_identities(order: i64, forms: &Forms) -> Result<Outcome, CliError> {
    if order < 2 {
        return Err(CliError::Usage("--order must be >= 2".into()));
    }
    let ramanujan = forms::check_ramanujan(order)?;
    let samples = [(0.0, 1.0), (0.3, 0.8), (-0.45, 1.7), (0.12, 0.6)]
        .map(|(re, im)| HalfPlanePoint::new(re, im).expect("upper half-plane"));
    // theta series live in q4 = q^{1/8}
    let jacobi = forms::check_jacobi(8 * order, &samples, forms)?;
    let delta = forms::check_delta(order)?;
    let pass = ramanujan.pass && jacobi.pass && delta.pass;
    Outcome::new(
        json!({
            "order": order,
            "ramanujan": ramanujan,
            "jacobi": jacobi,
            "delta": delta,
        }),
        pass,
    )
}

fn lattice_shells(max_norm2: i64) -> Result<Outcome, CliError> {
    let shells = lattice::enumerate_shells(max_norm2, false)?;
    let mut table = Table::new(vec!["norm2", "count"]);
    let mut rows = Vec::new();
    let mut pass = true;
    for s in &shells {
        // r(2n) = 240 sigma_3(n), the coefficients of E_4
        let expected = if s.norm2 % 2 == 0 {
            240 * forms::divisor_sum((s.norm2 / 2) as u64, 3)?
        } else {
            0
        };
        pass &= s.count == expected;
        table.push(vec![s.norm2.to_string(), s.count.to_string()]);
        rows.push(json!({"norm2": s.norm2, "count": s.count, "e4_coefficient": expected}));
    }
    Ok(Outcome::new(json!({"max_norm2": max_norm2, "shells": rows}), pass)?.with_table(table))
}

fn lattice_decode(point: &[f64]) -> Result<Outcome, CliError> {
    let y: [f64; DIM] = point
        .try_into()
        .map_err(|_| CliError::Usage(format!("--point needs {DIM} coordinates")))?;
    if y.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage("--point coordinates must be finite".into()));
    }
    let (v, dist2) = lattice::nearest_point(&y);
    Outcome::new(
        json!({
            "point": y,
            "nearest": v.coords(),
            "norm2": v.norm2(),
            "dist2": dist2,
        }),
        true,
    )
}

fn lattice_info() -> Result<Outcome, CliError> {
    let basis = lattice::e8_basis();
    let (num, den) = basis.determinant();
    let gram = basis.gram();
    let even_unimodular = num == den
        && gram.is_some_and(|g| (0..DIM).all(|i| g[i][i] % 2 == 0));
    let kissing = lattice::enumerate_shells(2, false)?
        .first()
        .map_or(0, |s| s.count);
    let min_norm = lattice::min_norm();
    let pass = even_unimodular && kissing == 240 && (min_norm - SQRT_2).abs() < 1e-15;
    Outcome::new(
        json!({
            "dimension": DIM,
            "basis": basis.rows(),
            "gram": gram,
            "determinant": num as f64 / den as f64,
            "covolume": lattice::covolume(),
            "min_norm": min_norm,
            "kissing_number": kissing,
            "even_unimodular": even_unimodular,
        }),
        pass,
    )
}

fn spec_for(lattice: LatticeArg) -> Result<PeriodicPackingSpec, CliError> {
    Ok(match lattice {
        LatticeArg::E8 => PeriodicPackingSpec::e8(),
        LatticeArg::Integer => PeriodicPackingSpec::integer(1.0)?,
    })
}

fn packing_density(lattice: LatticeArg) -> Result<Outcome, CliError> {
    let spec = spec_for(lattice)?;
    let density = packing::periodic_density(&spec)?;
    let target = match spec.lattice() {
        LatticeKind::E8 => E8_DENSITY,
        LatticeKind::Integer => packing::ball_volume(DIM as u32, 0.5),
    };
    Outcome::new(
        json!({
            "lattice": spec.lattice(),
            "separation": spec.separation(),
            "covolume": spec.covolume()?,
            "density": density,
            "target": target,
        }),
        (density - target).abs() <= 1e-12,
    )
}

fn packing_mc(lattice: LatticeArg, radius: f64, samples: u64, seed: u64) -> Result<Outcome, CliError> {
    let spec = spec_for(lattice)?;
    let est = packing::finite_density_mc(&spec, radius, samples, seed)?;
    let target = packing::periodic_density(&spec)?;
    let relative_error = (est.value - target).abs() / target;
    let sigmas = (est.value - target) / est.stderr;
    let pass = relative_error <= 0.05 && sigmas.abs() <= 3.0;
    Outcome::new(
        json!({
            "lattice": spec.lattice(),
            "estimate": est,
            "target": target,
            "relative_error": relative_error,
            "deviation_sigmas": sigmas,
        }),
        pass,
    )
}

fn magic_eval(r: f64, magic: &Magic<'_>) -> Result<Outcome, CliError> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(CliError::Usage(format!("--r must be finite and nonnegative, got {r}")));
    }
    let a = magic.a().eval(r)?;
    let b = magic.b().eval(r)?;
    let (g, g_hat) = magic.eval_pair(r)?;
    let propagated = if r >= SQRT_2 {
        json!({
            "a_im": magic.a().eval_propagated(r)?.im,
            "b_im": magic.b().eval_propagated(r)?.im,
        })
    } else {
        Value::Null
    };
    Outcome::new(
        json!({
            "r": r,
            "a": {"re": a.re, "im": a.im},
            "b": {"re": b.re, "im": b.im},
            "g": g,
            "g_hat": g_hat,
            "propagated": propagated,
        }),
        true,
    )
}

fn magic_table(which: WhichArg, cfg: &RunConfig, magic: &Magic<'_>) -> Result<Outcome, CliError> {
    let kind = match which {
        WhichArg::A => TableKind::A,
        WhichArg::B => TableKind::B,
        WhichArg::G => TableKind::G,
        WhichArg::Ghat => TableKind::GHat,
    };
    let radii = cfg.grid.map_or_else(
        || spherepack::magic::RadialTable::grid(6.0, 0.05),
        |g| g.linear(),
    );
    if radii.iter().any(|r| *r < 0.0) {
        return Err(CliError::Usage("radial grid must be nonnegative".into()));
    }
    let table = tabulate_radial(kind, &radii, magic)?;
    let mut csv = Table::new(vec!["r", "value"]);
    for (r, v) in table.radii.iter().zip(&table.values) {
        csv.push(vec![g17(*r), g17(*v)]);
    }
    Ok(Outcome::new(&table, true)?.with_table(csv))
}

fn magic_verify(cfg: &RunConfig, magic: &Magic<'_>) -> Result<Outcome, CliError> {
    let grid = cfg
        .grid
        .map_or_else(cohn_elkies::default_ce_grid, |g| g.linear());
    let tol = 1e-7 * magic.g0().abs();
    let report = cohn_elkies::verify_ce(
        |r| magic.eval_g(r),
        |r| magic.eval_g_hat(r),
        &grid,
        tol,
        1e-6,
    )?;
    let pass = report.pass;
    Outcome::new(report, pass)
}

fn bound(magic: &Magic<'_>) -> Result<Outcome, CliError> {
    let a0 = magic.a().eval(0.0)?;
    let b0 = magic.b().eval(0.0)?;
    let g0 = magic.g0();
    let ghat0 = magic.eval_g_hat(0.0)?;
    let bound = cohn_elkies::rescaled_bound(g0, ghat0, SQRT_2, 8)?;
    let density = packing::periodic_density(&PeriodicPackingSpec::e8())?;
    let pass = (bound - E8_DENSITY).abs() < 1e-6;
    Outcome::new(
        json!({
            "a0_im": a0.im,
            "b0_im": b0.im,
            "g0": g0,
            "ghat0": ghat0,
            "ratio": g0 / ghat0,
            "bound": bound,
            "target": E8_DENSITY,
            "e8_density": density,
        }),
        pass,
    )
}

fn axis_check(
    convention: Option<ConventionArg>,
    cfg: &RunConfig,
    forms: &Forms,
) -> Result<Outcome, CliError> {
    let grid = match cfg.grid {
        Some(g) => axis::log_grid(g.lo, g.hi, g.n)?,
        None => axis::default_axis_grid(),
    };
    let conventions = match convention {
        Some(ConventionArg::Direct) => vec![KernelConvention::Direct],
        Some(ConventionArg::Sweighted) => vec![KernelConvention::SWeighted],
        None => vec![KernelConvention::Direct, KernelConvention::SWeighted],
    };
    let mut reports = Vec::new();
    let mut csv = Table::new(vec!["convention", "t", "phi0", "psi_s", "combo_plus", "combo_minus"]);
    for &c in &conventions {
        reports.push(axis::verify_inequalities(&grid, c, forms)?);
        for s in axis::eq2_samples(&grid, c, forms)? {
            csv.push(vec![
                c.name().to_string(),
                g17(s.t),
                g17(s.phi0),
                g17(s.psi_s),
                g17(s.combo_plus),
                g17(s.combo_minus),
            ]);
        }
    }
    // the weighted convention carries the verdict whenever it is reported
    let verdict = reports
        .iter()
        .find(|r| r.convention == KernelConvention::SWeighted)
        .unwrap_or(&reports[0]);
    let pass = verdict.pass;
    Ok(Outcome::new(json!({"grid_points": grid.len(), "reports": reports}), pass)?.with_table(csv))
}
