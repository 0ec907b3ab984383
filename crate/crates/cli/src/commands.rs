use std::f64::consts::TAU;
use std::fmt;

use gaussmem_core::capacity::{additive_capacity, asymptotic_capacity_with_tol};
use gaussmem_core::numerics::DEFAULT_QUAD_TOL;
use gaussmem_core::{
    additive_lambda, build_mode_transform, closed_form_m, critical_energy, critical_temperature, finite_spectrum, g,
    optimal_distribution, AsymptoticSpectrum, CapacityMethod, ChannelParams,
};
use rayon::prelude::*;

use crate::args::{
    AdditiveArgs, CapacityArgs, ChannelArgs, Check, Command, Quantity, SimulateArgs, SpectrumArgs, SweepArgs, SweepVar,
    WaterfillArgs,
};
use crate::output::{Cell, Table};

/// Residual below which `simulate` reports a pass.
pub const SIMULATE_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(gaussmem_core::Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Core(e) if e.is_solver_failure() => 2,
            Failure::Core(_) | Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<gaussmem_core::Error> for Failure {
    fn from(e: gaussmem_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type Outcome<T> = Result<T, Failure>;

pub fn run(command: &Command) -> Outcome<Table> {
    match command {
        Command::Capacity(a) => capacity(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Waterfill(a) => waterfill(a),
        Command::Simulate(a) => simulate(a),
        Command::Additive(a) => additive(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn params(c: &ChannelArgs) -> Outcome<ChannelParams> {
    Ok(ChannelParams::new(c.kappa, c.mu, c.nbar)?)
}

fn quad_tol(tol: Option<f64>) -> Outcome<f64> {
    match tol {
        None => Ok(DEFAULT_QUAD_TOL),
        Some(t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => Err(usage(format!("--tol must be positive, got {t}"))),
    }
}

fn z_grid(points: usize) -> Outcome<Vec<f64>> {
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    Ok((0..points).map(|i| TAU * i as f64 / (points - 1) as f64).collect())
}

fn method_name(m: CapacityMethod) -> &'static str {
    match m {
        CapacityMethod::Integral => "integral",
        CapacityMethod::SpecialCase => "special_case",
        CapacityMethod::AdditiveLimit => "additive_limit",
    }
}

fn capacity(a: &CapacityArgs) -> Outcome<Table> {
    let p = params(&a.channel)?;
    let r = asymptotic_capacity_with_tol(&p, a.energy, quad_tol(a.tol)?)?;
    let mut t = Table::new(&[
        "kappa",
        "mu",
        "nbar",
        "energy",
        "capacity_nats",
        "quadrature_error",
        "method",
        "lambda",
        "z0_fraction",
    ]);
    let (lambda, z0) = match r.distribution {
        Some(d) => (Cell::Num(d.lambda), Cell::Num(d.z0_fraction())),
        None => (Cell::Empty, Cell::Empty),
    };
    t.push(vec![
        p.kappa().into(),
        p.mu().into(),
        p.nbar().into(),
        a.energy.into(),
        r.nats_per_use.into(),
        r.quadrature_error.into(),
        method_name(r.method).into(),
        lambda,
        z0,
    ]);
    Ok(t)
}

fn spectrum(a: &SpectrumArgs) -> Outcome<Table> {
    let p = params(&a.channel)?;
    match a.n {
        Some(n) => {
            let s = finite_spectrum(&p, n)?;
            let divergent = s.divergent().map(|d| d.index);
            let mut t = Table::new(&["index", "eigenvalue", "ln_eigenvalue", "divergent"]);
            for (i, &x) in s.eigenvalues().iter().enumerate() {
                let ln = match s.divergent() {
                    Some(d) if d.index == i => d.ln_value,
                    _ => x.ln(),
                };
                t.push(vec![i.into(), x.into(), ln.into(), (divergent == Some(i)).into()]);
            }
            Ok(t)
        }
        None => {
            let symbol = AsymptoticSpectrum::new(&p);
            let mut t = Table::new(&["z", "eta"]);
            for z in z_grid(a.points)? {
                t.push(vec![z.into(), symbol.eval(z)?.into()]);
            }
            Ok(t)
        }
    }
}

fn waterfill(a: &WaterfillArgs) -> Outcome<Table> {
    let p = params(&a.channel)?;
    let d = optimal_distribution(&p, a.energy)?;
    let mut t = Table::new(&["z", "eta", "n_of_z", "lambda", "z0"]);
    for z in z_grid(a.points)? {
        t.push(vec![
            z.into(),
            d.eta(z).into(),
            d.n_of_z(z).into(),
            d.lambda.into(),
            d.z0.into(),
        ]);
    }
    Ok(t)
}

fn simulate(a: &SimulateArgs) -> Outcome<Table> {
    let p = params(&a.channel)?;
    let transform = build_mode_transform(&p, a.n)?;
    let mut t = Table::new(&["check", "n", "max_abs_residual", "max_scaled_residual", "pass"]);
    let mut row = |name: &str, abs: f64, scaled: f64| {
        t.push(vec![
            name.into(),
            a.n.into(),
            abs.into(),
            scaled.into(),
            (scaled < SIMULATE_TOL).into(),
        ]);
    };
    if matches!(a.check, Check::ClosedForm | Check::All) {
        let r = transform.gram_residual(&closed_form_m(&p, a.n)?);
        row("closed-form", r.absolute, r.scaled);
    }
    if matches!(a.check, Check::Bogoliubov | Check::All) {
        let r = transform.bogoliubov_residual();
        row("bogoliubov", r.absolute, r.scaled);
    }
    Ok(t)
}

fn additive(a: &AdditiveArgs) -> Outcome<Table> {
    let r = additive_capacity(a.mu, a.nc, a.energy)?;
    let bound = g(a.energy + a.nc)? - g(a.nc)?;
    let lambda = if a.energy > 0.0 {
        Cell::Num(additive_lambda(a.nc, a.energy)?)
    } else {
        Cell::Empty
    };
    let mut t = Table::new(&[
        "mu",
        "n_c",
        "energy",
        "capacity_nats",
        "single_mode_bound",
        "lambda",
        "quadrature_error",
    ]);
    t.push(vec![
        a.mu.into(),
        a.nc.into(),
        a.energy.into(),
        r.nats_per_use.into(),
        bound.into(),
        lambda,
        r.quadrature_error.into(),
    ]);
    Ok(t)
}

fn var_name(v: SweepVar) -> &'static str {
    match v {
        SweepVar::Nbar => "nbar",
        SweepVar::Kappa => "kappa",
        SweepVar::Mu => "mu",
        SweepVar::Energy => "energy",
        SweepVar::NUses => "n_uses",
    }
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::Capacity => "capacity_nats",
        Quantity::Z0Fraction => "z0_fraction",
        Quantity::NOfZ => "n_of_z",
        Quantity::Spectrum => "eigenvalue",
        Quantity::ECrit => "e_crit",
        Quantity::NCrit => "n_crit",
    }
}

/// Fixed values of one sweep point.
#[derive(Debug, Clone, Copy)]
struct Point {
    value: f64,
    kappa: Option<f64>,
    mu: Option<f64>,
    nbar: f64,
    energy: Option<f64>,
    n: Option<usize>,
}

impl Point {
    fn params(&self) -> Outcome<ChannelParams> {
        let kappa = self.kappa.ok_or_else(|| usage("--kappa is required unless swept"))?;
        let mu = self.mu.ok_or_else(|| usage("--mu is required unless swept"))?;
        Ok(ChannelParams::new(kappa, mu, self.nbar)?)
    }

    fn energy(&self) -> Outcome<f64> {
        self.energy
            .ok_or_else(|| usage("--energy is required for this quantity"))
    }

    fn n(&self) -> Outcome<usize> {
        self.n.ok_or_else(|| usage("--n is required for the spectrum quantity"))
    }
}

fn sweep_points(a: &SweepArgs) -> Outcome<Vec<Point>> {
    if a.steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    if !(a.from.is_finite() && a.to.is_finite() && a.from < a.to) {
        return Err(usage(format!("--from must be below --to, got {} and {}", a.from, a.to)));
    }
    (0..a.steps)
        .map(|i| {
            let value = a.from + (a.to - a.from) * i as f64 / (a.steps - 1) as f64;
            let mut p = Point {
                value,
                kappa: a.kappa,
                mu: a.mu,
                nbar: a.nbar,
                energy: a.energy,
                n: a.n,
            };
            match a.var {
                SweepVar::Nbar => p.nbar = value,
                SweepVar::Kappa => p.kappa = Some(value),
                SweepVar::Mu => p.mu = Some(value),
                SweepVar::Energy => p.energy = Some(value),
                SweepVar::NUses => {
                    let n = value.round();
                    if n < 1.0 {
                        return Err(usage("n_uses must stay >= 1"));
                    }
                    p.value = n;
                    p.n = Some(n as usize);
                }
            }
            Ok(p)
        })
        .collect()
}

fn scalar(q: Quantity, p: &Point, tol: f64) -> Outcome<f64> {
    Ok(match q {
        Quantity::Capacity => asymptotic_capacity_with_tol(&p.params()?, p.energy()?, tol)?.nats_per_use,
        Quantity::Z0Fraction => optimal_distribution(&p.params()?, p.energy()?)?.z0_fraction(),
        Quantity::ECrit => critical_energy(&p.params()?)?,
        Quantity::NCrit => {
            let c = p.params()?;
            critical_temperature(c.kappa(), c.mu(), p.energy()?)?
        }
        Quantity::NOfZ | Quantity::Spectrum => unreachable!("long quantities are handled separately"),
    })
}

fn point_rows(q: &[Quantity], p: &Point, tol: f64, zs: &[f64]) -> Outcome<Vec<Vec<Cell>>> {
    match q {
        [Quantity::NOfZ] => {
            let d = optimal_distribution(&p.params()?, p.energy()?)?;
            Ok(zs
                .iter()
                .map(|&z| vec![p.value.into(), z.into(), d.n_of_z(z).into()])
                .collect())
        }
        [Quantity::Spectrum] => {
            let s = finite_spectrum(&p.params()?, p.n()?)?;
            Ok(s.eigenvalues()
                .iter()
                .enumerate()
                .map(|(i, &x)| vec![p.value.into(), i.into(), x.into()])
                .collect())
        }
        _ => {
            let mut row = vec![Cell::Num(p.value)];
            for &qq in q {
                row.push(scalar(qq, p, tol)?.into());
            }
            Ok(vec![row])
        }
    }
}

fn sweep(a: &SweepArgs) -> Outcome<Table> {
    let q = &a.quantity;
    if q.iter().any(|x| x.is_long()) && q.len() > 1 {
        return Err(usage("n_of_z and spectrum must be requested on their own"));
    }
    let tol = quad_tol(a.tol)?;
    let points = sweep_points(a)?;
    let zs = if q == &[Quantity::NOfZ] {
        z_grid(a.points)?
    } else {
        Vec::new()
    };

    let var = var_name(a.var);
    let mut table = match q.as_slice() {
        [Quantity::NOfZ] => Table::new(&[var, "z", "n_of_z"]),
        [Quantity::Spectrum] => Table::new(&[var, "index", "eigenvalue"]),
        _ => {
            let mut cols = vec![var];
            cols.extend(q.iter().map(|&x| quantity_name(x)));
            Table::new(&cols)
        }
    };

    // Indexed parallel collect keeps the input order.
    let results: Vec<Outcome<Vec<Vec<Cell>>>> = points.par_iter().map(|p| point_rows(q, p, tol, &zs)).collect();
    for r in results {
        for row in r? {
            table.push(row);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    use crate::args::Cli;

    fn table(args: &[&str]) -> Outcome<Table> {
        let cli = Cli::try_parse_from(std::iter::once("gaussmem").chain(args.iter().copied())).unwrap();
        run(&cli.command)
    }

    fn num(c: &Cell) -> f64 {
        match c {
            Cell::Num(x) => *x,
            other => panic!("not a number: {other:?}"),
        }
    }

    #[test]
    fn identity_capacity_row() {
        let t = table(&[
            "capacity", "--kappa", "1", "--mu", "0.5", "--nbar", "0", "--energy", "8",
        ])
        .unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!((num(&t.rows[0][4]) - 3.139489).abs() < 1e-6);
        assert_eq!(t.rows[0][6], Cell::Text("special_case".into()));
        assert_eq!(t.rows[0][7], Cell::Empty);
    }

    #[test]
    fn exit_codes() {
        let e = table(&["capacity", "--kappa", "2", "--mu", "0.5", "--energy", "8"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let e = table(&["capacity", "--kappa", "-1", "--mu", "0.5", "--energy", "8"]).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        let e = table(&[
            "capacity", "--kappa", "0.5", "--mu", "0.5", "--energy", "8", "--tol", "0",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 64);
        let e = table(&[
            "sweep",
            "--var",
            "nbar",
            "--from",
            "1",
            "--to",
            "0",
            "--steps",
            "3",
            "--quantity",
            "capacity",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 64);
        let solver = Failure::Core(gaussmem_core::Error::Solver("x".into()));
        assert_eq!(solver.exit_code(), 2);
    }

    #[test]
    fn simulate_reports_pass() {
        let t = table(&[
            "simulate",
            "--kappa",
            "0.5",
            "--mu",
            "0.5",
            "--n",
            "8",
            "--check",
            "closed-form",
        ])
        .unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(num(&t.rows[0][2]) < 1e-10);
        assert_eq!(t.rows[0][4], Cell::Bool(true));
    }

    #[test]
    fn sweep_keeps_order_and_marks_transition() {
        let t = table(&[
            "sweep",
            "--var",
            "nbar",
            "--from",
            "0",
            "--to",
            "4",
            "--steps",
            "41",
            "--kappa",
            "0.9",
            "--mu",
            "0.8",
            "--energy",
            "8",
            "--quantity",
            "z0_fraction",
        ])
        .unwrap();
        assert_eq!(t.rows.len(), 41);
        for (i, row) in t.rows.iter().enumerate() {
            let nbar = num(&row[0]);
            assert!((nbar - 0.1 * i as f64).abs() < 1e-12);
            let frac = num(&row[1]);
            if nbar < 0.75 {
                assert_eq!(frac, 0.0);
            } else if nbar > 0.85 {
                assert!(frac > 0.0);
            }
        }
    }

    #[test]
    fn long_quantities_stand_alone() {
        let e = table(&[
            "sweep",
            "--var",
            "nbar",
            "--from",
            "0",
            "--to",
            "1",
            "--steps",
            "2",
            "--kappa",
            "0.9",
            "--mu",
            "0.8",
            "--energy",
            "8",
            "--quantity",
            "n_of_z,capacity",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 64);
        let t = table(&[
            "sweep",
            "--var",
            "n_uses",
            "--from",
            "2",
            "--to",
            "4",
            "--steps",
            "3",
            "--kappa",
            "0.5",
            "--mu",
            "0.5",
            "--quantity",
            "spectrum",
        ])
        .unwrap();
        assert_eq!(t.rows.len(), 2 + 3 + 4);
    }
}
