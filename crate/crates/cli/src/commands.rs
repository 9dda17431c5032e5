use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};

use qcoin_core::geometry::{self, BlochPoint, BoxRegion};
use qcoin_core::identities::Suite;
use qcoin_core::montecarlo::{self, TrialEstimate};
use qcoin_core::oracle::{self, DEFAULT_BUDGET};
use qcoin_core::quantum::{self, NQubitState, StateRecord};
use qcoin_core::sequences::{self, RatioKind};
use qcoin_core::{
    probability, CoinModel, Error, Execution, ExactRational, PatternRecord, PatternSpec, Placement,
};

use crate::report::{Cell, Report};
use crate::{PatternArgs, EXIT_RESOURCE, EXIT_USAGE, EXIT_VERIFY};

/// Optional override of the enumeration budget used by `--verify`.
pub const BUDGET_ENV: &str = "QCOIN_ENUM_BUDGET";

const TOLERANCE: f64 = 1e-12;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Resource(_)) => EXIT_RESOURCE,
            CliError::Core(Error::Identity(_)) => EXIT_VERIFY,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

pub struct Outcome {
    pub report: Report,
    /// Set when a verification step disagreed; the report is still printed.
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, failure: None }
    }
}

type CmdResult = Result<Outcome, CliError>;

fn budget() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .parse()
            .or_else(|_| usage(format!("{BUDGET_ENV} must be an integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Parses `a/b`, an integer, or a finite decimal like `0.25` exactly.
pub fn parse_rational(s: &str) -> Result<ExactRational, CliError> {
    let bad = || CliError::Usage(format!("cannot parse '{s}' as a rational"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale: BigInt = Pow::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(digits, scale));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

/// Parses an inclusive range `a..b`.
fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let (a, b) = s.split_once("..").ok_or_else(|| CliError::Usage(format!("bad range '{s}'")))?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad range '{s}'")));
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return usage(format!("empty range '{s}'"));
    }
    Ok((a, b))
}

impl PatternArgs {
    fn alphabet(&self) -> Result<u32, CliError> {
        match (self.d, self.n_coin) {
            (Some(d), _) => Ok(d),
            (None, Some(q)) if (1..=31).contains(&q) => Ok(1 << q),
            (None, Some(q)) => usage(format!("--n-coin {q} outside 1..=31")),
            (None, None) => Ok(2),
        }
    }

    fn length(&self) -> Result<Option<u32>, CliError> {
        match (self.n, self.m) {
            (Some(a), Some(b)) if a != b => usage("--n and --M disagree"),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn record(&self, length_override: Option<u32>) -> Result<PatternRecord, CliError> {
        if self.partition.is_empty() && !self.positions.is_empty() {
            return usage("--positions requires --partition");
        }
        let length = match length_override.or(self.length()?) {
            Some(n) => n,
            None if !self.partition.is_empty() => self.partition.iter().sum(),
            None => return usage("a length is required (--n or --M)"),
        };
        let placement = match (self.place.as_str(), self.k) {
            ("end" | "position", Some(_)) => "position".to_string(),
            (p, Some(_)) => return usage(format!("--k cannot be combined with --place {p}")),
            ("position", None) if self.positions.is_empty() => {
                return usage("--place position needs --k or --positions")
            }
            (p, None) => p.to_string(),
        };
        Ok(PatternRecord {
            alphabet_size: self.alphabet()?,
            length,
            placement,
            k: self.k,
            partition: self.partition.clone(),
            positions: self.positions.clone(),
        })
    }

    fn spec(&self, length_override: Option<u32>) -> Result<PatternSpec, CliError> {
        Ok(PatternSpec::try_from(&self.record(length_override)?)?)
    }

    /// Specs for each length of `--scan`, or the single spec.
    fn specs(&self, scan: Option<&str>) -> Result<Vec<PatternSpec>, CliError> {
        match scan {
            None => Ok(vec![self.spec(None)?]),
            Some(range) => {
                if !self.partition.is_empty() {
                    return usage("--scan cannot be combined with --partition");
                }
                let (a, b) = parse_range(range)?;
                if a < 0 || b > u32::MAX as i64 {
                    return usage(format!("scan range '{range}' out of bounds"));
                }
                (a..=b).map(|n| self.spec(Some(n as u32))).collect()
            }
        }
    }
}

fn describe(spec: &PatternSpec) -> String {
    let segs = spec.segments();
    if segs.len() == 1 {
        return segs[0].placement.to_string();
    }
    segs.iter().map(|s| format!("{}@{}", s.placement, s.length)).collect::<Vec<_>>().join("|")
}

pub fn count(args: &PatternArgs, verify: bool, scan: Option<&str>) -> CmdResult {
    let mut columns = vec!["length", "alphabet_size", "pattern", "count", "total_outcomes"];
    if verify {
        columns.extend(["oracle_count", "agree"]);
    }
    let mut report = Report::new("count", columns);
    let budget = budget()?;
    let mut failure = None;
    for spec in args.specs(scan)? {
        let c = qcoin_core::pattern::count(&spec)?;
        let mut row = vec![
            Cell::Count(spec.total_length() as u64),
            Cell::Count(spec.alphabet_size() as u64),
            Cell::text(describe(&spec)),
            Cell::Int(c.count.clone()),
            Cell::Int(c.total_outcomes.clone()),
        ];
        if verify {
            let o = oracle::brute_force_count_with(&spec, budget, Execution::Parallel)?;
            let agree = o.count == c.count;
            if !agree {
                failure = Some(format!("closed form {} vs enumeration {} for {}", c.count, o.count, describe(&spec)));
            }
            row.extend([Cell::Int(o.count), Cell::Bool(agree)]);
        }
        report.push(row);
    }
    Ok(Outcome { report, failure })
}

/// Closed-form probability through the operation that names the case.
fn closed_form_probability(spec: &PatternSpec) -> Result<ExactRational, Error> {
    let segs = spec.segments();
    let n = spec.total_length();
    match (spec.alphabet_size(), segs) {
        (2, [s]) => match s.placement {
            Placement::AtEnd => probability::prob_end(n),
            Placement::AtPosition(k) => probability::prob_position(n, k),
            Placement::AnywhereOnce => probability::prob_anywhere_once(n),
            Placement::AtStart => probability::prob_position(n, 1),
        },
        (d, [s]) if s.placement == Placement::AtEnd => probability::prob_qudit_end(d, n),
        _ => probability::prob_partitioned(spec),
    }
}

pub fn prob(args: &PatternArgs, p1: Option<&str>, verify: bool, scan: Option<&str>) -> CmdResult {
    let mut columns = vec!["length", "alphabet_size", "pattern", "probability", "decimal"];
    if verify {
        columns.extend(["oracle_probability", "agree"]);
    }
    let mut report = Report::new("prob", columns);
    let p1 = p1.map(parse_rational).transpose()?;
    if let Some(p) = &p1 {
        report.meta("p1", crate::report::rational_string(p));
    }
    let budget = budget()?;
    let mut failure = None;
    for spec in args.specs(scan)? {
        let n = spec.total_length();
        let (p, oracle_p) = match &p1 {
            None => {
                let p = closed_form_probability(&spec)?;
                let oracle_p = if verify {
                    let o = oracle::brute_force_count_with(&spec, budget, Execution::Parallel)?;
                    Some(BigRational::new(o.count, o.total_outcomes))
                } else {
                    None
                };
                (p, oracle_p)
            }
            Some(p1) => {
                if spec.is_partitioned() {
                    return usage("--p1 applies to unpartitioned patterns only");
                }
                let model = CoinModel::biased(spec.alphabet_size(), p1.clone())?;
                let placement = spec.segments()[0].placement;
                let p = match placement {
                    Placement::AtEnd => probability::prob_generic_coin(&model, n)?,
                    other => probability::prob_event(&model, n, other)?,
                };
                let oracle_p = if verify {
                    if 1u64.checked_shl(n).is_none_or(|s| s > budget) {
                        return Err(Error::Resource(format!("2^{n} indicator strings exceed the budget")).into());
                    }
                    Some(oracle::weighted_oracle_probability(p1, n, placement)?)
                } else {
                    None
                };
                (p, oracle_p)
            }
        };
        let mut row = vec![
            Cell::Count(n as u64),
            Cell::Count(spec.alphabet_size() as u64),
            Cell::text(describe(&spec)),
            Cell::Rational(p.clone()),
            Cell::decimal_of(&p),
        ];
        if let Some(o) = oracle_p {
            let agree = o == p;
            if !agree {
                failure = Some(format!("closed form {p} vs enumeration {o} for {}", describe(&spec)));
            }
            row.extend([Cell::Rational(o), Cell::Bool(agree)]);
        }
        report.push(row);
    }
    Ok(Outcome { report, failure })
}

fn estimate_row(e: &TrialEstimate, exact: &ExactRational, abs_error: f64) -> Vec<Cell> {
    vec![
        Cell::Count(e.trials),
        Cell::Count(e.hits),
        Cell::float(e.estimate, "statistical estimate"),
        Cell::float(e.std_error, "plug-in standard error"),
        Cell::Rational(exact.clone()),
        Cell::float(abs_error, "absolute error of estimate"),
        Cell::Count(e.seed),
    ]
}

pub fn simulate(
    args: &PatternArgs,
    p1: Option<&str>,
    profile: Option<&str>,
    runs: u64,
    seed: u64,
    schedule: &[u64],
    serial: bool,
) -> CmdResult {
    let spec = args.spec(None)?;
    if spec.is_partitioned() {
        return usage("simulate supports unpartitioned patterns only");
    }
    let model = match (profile, p1) {
        (Some(profile), _) => {
            let probs = profile.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
            let model = CoinModel::with_profile(probs)?;
            if (args.d.is_some() || args.n_coin.is_some())
                && model.outcome_count() != spec.alphabet_size()
            {
                return usage("--profile length disagrees with the alphabet size");
            }
            model
        }
        (None, Some(p)) => CoinModel::biased(spec.alphabet_size(), parse_rational(p)?)?,
        (None, None) => CoinModel::fair(spec.alphabet_size())?,
    };
    let m = spec.total_length();
    let event = spec.segments()[0].placement;
    let exec = if serial { Execution::Serial } else { Execution::Parallel };

    let mut report = Report::new(
        "simulate",
        vec!["runs", "hits", "estimate", "std_error", "exact", "abs_error", "seed"],
    );
    report.meta("rng", montecarlo::RNG_NAME);
    report.meta("outcome_count", model.outcome_count());
    report.meta("p1", crate::report::rational_string(model.p_one()));
    report.meta("length", m);
    report.meta("event", event);

    if schedule.is_empty() {
        let e = montecarlo::simulate(&model, m, event, runs, seed, exec)?;
        let exact = probability::prob_event(&model, m, event)?;
        let abs_error = (e.estimate - exact.to_f64().unwrap_or(f64::NAN)).abs();
        report.push(estimate_row(&e, &exact, abs_error));
    } else {
        for point in montecarlo::convergence_report(&model, m, event, schedule, seed, exec)? {
            report.push(estimate_row(&point.estimate, &point.exact, point.abs_error));
        }
    }
    Ok(Outcome::ok(report))
}

fn parse_amplitudes(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(';')
        .map(|entry| {
            let mut parts = entry.split(',').map(|x| x.trim().parse::<f64>());
            let re = parts.next().and_then(|r| r.ok());
            let im = parts.next().map_or(Ok(0.0), |r| r);
            match (re, im, parts.next()) {
                (Some(re), Ok(im), None) => Ok(Complex64::new(re, im)),
                _ => usage(format!("bad amplitude '{entry}'")),
            }
        })
        .collect()
}

pub fn entropy(
    amps: Option<&str>,
    state_file: Option<&Path>,
    max_random: Option<u32>,
    normalize: bool,
    split: Option<u32>,
) -> CmdResult {
    let state = match (amps, state_file, max_random) {
        (Some(a), _, _) => {
            let v = parse_amplitudes(a)?;
            if normalize { NQubitState::normalized(v)? } else { NQubitState::new(v)? }
        }
        (None, Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let record: StateRecord = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad state file: {e}")))?;
            NQubitState::try_from(&record)?
        }
        (None, None, Some(n)) => {
            if !(1..=20).contains(&n) {
                return usage("--max-random must be in 1..=20");
            }
            quantum::maximally_random_state(n, &vec![0.0; (1usize << n) - 1])?
        }
        (None, None, None) => return usage("give --amps, --state-file or --max-random"),
    };
    let mut columns = vec!["qubits", "entropy_bits", "max_bits"];
    if split.is_some() {
        columns.extend(["split", "additivity_gap"]);
    }
    let mut report = Report::new("entropy", columns);
    let mut row = vec![
        Cell::Count(state.qubit_count() as u64),
        Cell::float(quantum::shannon_entropy(&state), "abs 1e-10 (log sums)"),
        Cell::Count(state.qubit_count() as u64),
    ];
    if let Some(s) = split {
        row.push(Cell::Count(s as u64));
        row.push(Cell::float(quantum::entropy_additivity_gap(&state, s)?, "abs 1e-10 (log sums)"));
    }
    report.push(row);
    Ok(Outcome::ok(report))
}

pub fn bloch(theta: f64, phi: f64) -> CmdResult {
    let point = BlochPoint::new(theta, phi)?;
    let cap = geometry::cap_area_fraction(theta)?;
    let state = quantum::bloch_state(point.theta(), point.phi())?;
    let mut report = Report::new("bloch", vec!["theta", "phi", "cap_fraction", "p0", "p1_from_state"]);
    report.meta("convention", "cap measured from the |0> pole; cap fraction = p1");
    report.push(vec![
        Cell::float(theta, "input"),
        Cell::float(phi, "input"),
        Cell::float(cap, "abs 1e-14"),
        Cell::float(point.p_zero(), "abs 1e-14"),
        Cell::float(state.probabilities()[1], "abs 1e-14"),
    ]);
    Ok(Outcome::ok(report))
}

fn parse_box(s: &str) -> Result<Vec<(u64, u64, u32)>, CliError> {
    s.split(';')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [k, l, n] => match (k.parse(), l.parse(), n.parse()) {
                    (Ok(k), Ok(l), Ok(n)) => Ok((k, l, n)),
                    _ => usage(format!("bad axis '{axis}'")),
                },
                _ => usage(format!("axis '{axis}' must be k,l,n")),
            }
        })
        .collect()
}

pub fn box_region(spec: &str) -> CmdResult {
    let region = BoxRegion::new(&parse_box(spec)?)?;
    let p = geometry::box_probability(&region)?;
    let mut report =
        Report::new("box", vec!["axes", "probability", "decimal", "projector", "agree"]);
    let mut failure = None;
    let (projector, agree) = if region.total_qubits() <= 16 {
        let mut state = None;
        for axis in region.axes() {
            let n = axis.qubits;
            if n == 0 {
                continue;
            }
            let phases: Vec<f64> = (1..1usize << n).map(|j| 0.37 * j as f64).collect();
            let factor = quantum::maximally_random_state(n, &phases)?;
            state = Some(match state {
                None => factor,
                Some(s) => quantum::tensor_product(&s, &factor),
            });
        }
        match state {
            Some(state) => {
                let q = quantum::projector_probability(&state, region.basis_indices())?;
                let agree = (q - p.to_f64().unwrap_or(f64::NAN)).abs() < TOLERANCE;
                if !agree {
                    failure = Some(format!("projector {q} vs ratio {p}"));
                }
                (Cell::float(q, "abs 1e-12"), Cell::Bool(agree))
            }
            None => (Cell::text("-"), Cell::text("-")),
        }
    } else {
        (Cell::text("-"), Cell::text("-"))
    };
    let axes = region
        .to_triples()
        .iter()
        .map(|(k, l, n)| format!("[{k},{l})/2^{n}"))
        .collect::<Vec<_>>()
        .join(" x ");
    report.push(vec![Cell::text(axes), Cell::Rational(p.clone()), Cell::decimal_of(&p), projector, agree]);
    Ok(Outcome { report, failure })
}

pub fn hadamard(n: u32, check: bool) -> CmdResult {
    let h = quantum::generalized_hadamard(n)?;
    let d = h.dim();
    if !check {
        let mut report = Report::new("hadamard", vec!["row", "col", "re", "im"]);
        report.meta("dimension", d);
        for r in 0..d {
            for c in 0..d {
                let z = h.get(r, c);
                report.push(vec![
                    Cell::Count(r as u64),
                    Cell::Count(c as u64),
                    Cell::float(z.re, "abs 1e-15"),
                    Cell::float(z.im, "abs 1e-15"),
                ]);
            }
        }
        return Ok(Outcome::ok(report));
    }
    if n > 8 {
        return Err(Error::Resource(format!("--check is limited to n <= 8, got {n}")).into());
    }
    let unitarity = h.unitarity_residual();
    let mut qnumber: f64 = 0.0;
    for k in 0..d {
        let col = quantum::coin_state_via_q_number(n, k)?;
        qnumber = qnumber.max(quantum::max_abs_diff(&col, &h.column(k)));
    }
    let pass = unitarity < TOLERANCE && qnumber < TOLERANCE;
    let mut report = Report::new(
        "hadamard",
        vec!["n", "dimension", "unitarity_residual", "qnumber_residual", "pass"],
    );
    report.meta("tolerance", TOLERANCE);
    report.push(vec![
        Cell::Count(n as u64),
        Cell::Count(d as u64),
        Cell::float(unitarity, "must be < 1e-12"),
        Cell::float(qnumber, "must be < 1e-12"),
        Cell::Bool(pass),
    ]);
    let failure = (!pass).then(|| format!("residuals {unitarity:e}, {qnumber:e}"));
    Ok(Outcome { report, failure })
}

pub fn identities(suite: &str, max: Option<u32>) -> CmdResult {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let mut report = Report::new("identities", vec!["suite", "max", "checks", "failures", "pass"]);
    let mut failed = Vec::new();
    for s in suites {
        let r = s.run(max.unwrap_or_else(|| s.default_max()))?;
        if !r.all_pass() {
            failed.push(s.name());
        }
        report.push(vec![
            Cell::text(s.name()),
            Cell::Count(r.max as u64),
            Cell::Count(r.checks.len() as u64),
            Cell::Count(r.failures() as u64),
            Cell::Bool(r.all_pass()),
        ]);
    }
    let failure = (!failed.is_empty()).then(|| format!("failing suites: {}", failed.join(", ")));
    Ok(Outcome { report, failure })
}

pub fn seq(kind: &str, n: Option<i64>, d: u64, precision: u32, scan: Option<&str>) -> CmdResult {
    let indices: Vec<i64> = match (n, scan) {
        (_, Some(range)) => {
            let (a, b) = parse_range(range)?;
            (a..=b).collect()
        }
        (Some(n), None) => vec![n],
        (None, None) => return usage("give --n or --scan"),
    };
    let mut report = Report::new("seq", vec!["n", "value"]);
    report.meta("kind", kind);
    let unsigned = |i: i64| -> Result<u32, CliError> {
        u32::try_from(i).or_else(|_| usage(format!("{kind} needs a non-negative index, got {i}")))
    };
    for i in indices {
        let value = match kind {
            "fibonacci" => Cell::Int(sequences::fibonacci(i)?),
            "lucas" => Cell::Int(sequences::lucas(i)?),
            "qudit" => Cell::Int(sequences::qudit_fibonacci(d, unsigned(i)?)?),
            "binet" => Cell::Decimal {
                value: sequences::binet_evaluate(unsigned(i)?, precision)?.to_string(),
                context: "significant digits = --precision",
            },
            "ratio-count" | "ratio-probability" => {
                let k = if kind == "ratio-count" { RatioKind::Count } else { RatioKind::Probability };
                let r = sequences::ratio_limit(k, i)?;
                Cell::Decimal {
                    value: format!("{} = {}", crate::report::rational_string(&r), sequences::render_ratio(&r, precision)),
                    context: "exact ratio and its rendering with --precision fractional digits",
                }
            }
            other => return usage(format!("unknown sequence kind '{other}'")),
        };
        report.push(vec![Cell::Int(BigInt::from(i)), value]);
    }
    Ok(Outcome::ok(report))
}
