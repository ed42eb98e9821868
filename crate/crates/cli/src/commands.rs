use std::fs;
use std::path::{Path, PathBuf};

use coopbc_core::dnfsim::{CodeConfig, InputLaw, SimChannel};
use coopbc_core::export::{fmt_real, Record};
use coopbc_core::figures::{self, FigureData};
use coopbc_core::oracle::{compare_with_family, GridSpec};
use coopbc_core::regions::thresholds_strictly_decreasing;
use coopbc_core::{
    inner_boundary, is_more_capable, make_bec, make_bsc, oracle_regions, outer_boundary,
    r1_threshold, simulate, sweep_thresholds, AuxiliaryJoint, BecBscBC, ChannelPair,
    DiscreteChannel, Format, GaussianBC, LogBase, MoreCapableCheck, MoreCapableVerdict,
    ParametricFamily, Tolerance,
};

use crate::args::{ChannelSpec, Cli, Command, Family, GlobalArgs, SimulateArgs, Which};
use crate::Failure;

/// Oracle corners may rise above the exact parametric bound only by rounding.
const ORACLE_EXCESS_TOL: f64 = 1e-9;

pub struct RunConfig {
    pub log_base: LogBase,
    pub tol: Tolerance,
    pub grid_size: usize,
    pub output_format: Format,
    pub output_path: PathBuf,
    pub seed: u64,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs) -> Result<Self, Failure> {
        if g.grid < 2 {
            return Err(Failure::Invalid(format!(
                "--grid must be at least 2, got {}",
                g.grid
            )));
        }
        Ok(RunConfig {
            log_base: g.base,
            tol: Tolerance::new(g.tol, Tolerance::default().max_iters)?,
            grid_size: g.grid,
            output_format: g.format.into(),
            output_path: g.out.clone(),
            seed: g.seed,
        })
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, Failure> {
        fs::create_dir_all(&self.output_path)?;
        let path = self.output_path.join(name);
        fs::write(&path, contents)
            .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    fn write_table<R: Record>(&self, stem: &str, rows: &[R]) -> Result<PathBuf, Failure> {
        let name = format!("{stem}.{}", self.output_format.extension());
        self.write(&name, &self.output_format.write(rows)?)
    }
}

fn announce(path: &Path) {
    println!("wrote {}", path.display());
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = RunConfig::from_args(&cli.global)?;
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(Failure::Invalid("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Invalid(e.to_string()))?;
    }
    match cli.command {
        Command::Region {
            channel,
            c12,
            which,
        } => region(&cfg, &channel, c12, which),
        Command::Fig2 { c12 } => {
            let c12s =
                c12.unwrap_or_else(|| figures::default_c12s(&figures::FIG2_C12_BITS, cfg.log_base));
            let fig = figures::fig2(&c12s, cfg.log_base, cfg.grid_size, cfg.tol)?;
            write_figure(&cfg, &fig)
        }
        Command::Fig3 { c12 } => {
            let c12s =
                c12.unwrap_or_else(|| figures::default_c12s(&figures::FIG3_C12_BITS, cfg.log_base));
            let fig = figures::fig3(&c12s, cfg.log_base, cfg.grid_size, cfg.tol)?;
            write_figure(&cfg, &fig)
        }
        Command::CheckMc {
            family,
            a,
            b,
            ch1,
            ch2,
            resolution,
        } => {
            let channel = match (family, a, b) {
                (Some(family), Some(a), Some(b)) => Some(ChannelSpec { family, a, b }),
                _ => None,
            };
            check_mc(&cfg, channel.as_ref(), ch1, ch2, resolution)
        }
        Command::OracleCompare {
            channel,
            c12,
            u_cardinality,
            steps,
            budget,
            max_evaluations,
        } => {
            let spec = GridSpec::new(u_cardinality, steps)?.with_max_evaluations(max_evaluations);
            oracle_compare(&cfg, &channel, c12, spec, budget)
        }
        Command::Sweep {
            channel,
            c12,
            points,
        } => sweep(&cfg, &channel, c12, points),
        Command::Simulate(args) => simulate_cmd(&cfg, &args),
    }
}

enum Bc {
    Gaussian(GaussianBC),
    BecBsc(BecBscBC),
}

impl Bc {
    fn new(spec: &ChannelSpec, base: LogBase) -> Result<Self, Failure> {
        Ok(match spec.family {
            Family::Gaussian => Bc::Gaussian(GaussianBC::new(spec.a, spec.b, base)?),
            Family::Becbsc => Bc::BecBsc(BecBscBC::new(spec.a, spec.b, base)?),
        })
    }

    fn family(&self, c12: f64) -> coopbc_core::Result<ParametricFamily> {
        match self {
            Bc::Gaussian(bc) => bc.family(c12),
            Bc::BecBsc(bc) => bc.family(c12),
        }
    }

    fn max_c12(&self) -> f64 {
        match self {
            Bc::Gaussian(bc) => bc.max_c12(),
            Bc::BecBsc(bc) => bc.max_c12(),
        }
    }
}

fn region(cfg: &RunConfig, spec: &ChannelSpec, c12: f64, which: Which) -> Result<(), Failure> {
    let bc = Bc::new(spec, cfg.log_base)?;
    let fam = bc.family(c12)?;
    println!("C1={}", fmt_real(fam.c1()));
    println!("C2={}", fmt_real(fam.c2()));
    println!("C12={}", fmt_real(c12));
    match &bc {
        Bc::Gaussian(g) => println!("alpha_th={}", fmt_real(g.alpha_th_closed(c12)?)),
        Bc::BecBsc(d) => println!("q_th={}", fmt_real(d.q_threshold(c12, cfg.tol)?)),
    }
    println!("R1_th={}", fmt_real(r1_threshold(&fam, cfg.tol)?));
    if matches!(which, Which::Inner | Which::Both) {
        let f = inner_boundary(&fam, cfg.grid_size)?;
        announce(&cfg.write_table("region_inner", f.points())?);
    }
    if matches!(which, Which::Outer | Which::Both) {
        let f = outer_boundary(&fam, cfg.grid_size)?;
        announce(&cfg.write_table("region_outer", f.points())?);
    }
    Ok(())
}

fn write_figure(cfg: &RunConfig, fig: &FigureData) -> Result<(), Failure> {
    let fmt = cfg.output_format;
    for curve in &fig.curves {
        let name = fig.curve_file_name(curve.c12, fmt);
        announce(&cfg.write(&name, &fmt.write(curve.frontier.points())?)?);
    }
    announce(&cfg.write(&fig.diamonds_file_name(fmt), &fmt.write(&fig.diamonds)?)?);
    Ok(())
}

fn read_channel(path: &Path) -> Result<DiscreteChannel, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(DiscreteChannel::from_json(&text)?)
}

fn check_mc(
    cfg: &RunConfig,
    spec: Option<&ChannelSpec>,
    ch1: Option<PathBuf>,
    ch2: Option<PathBuf>,
    resolution: usize,
) -> Result<(), Failure> {
    let pair = match (spec, ch1, ch2) {
        (Some(s), None, None) => match s.family {
            Family::Becbsc => ChannelPair::new(make_bec(s.a)?, make_bsc(s.b)?)?,
            Family::Gaussian => {
                return Err(Failure::Invalid(
                    "check-mc needs discrete channels: becbsc TAU1 P2 or --ch1/--ch2".into(),
                ))
            }
        },
        (None, Some(a), Some(b)) => ChannelPair::new(read_channel(&a)?, read_channel(&b)?)?,
        _ => {
            return Err(Failure::Invalid(
                "give either becbsc TAU1 P2 or both --ch1 and --ch2".into(),
            ))
        }
    };
    let check = MoreCapableCheck {
        resolution,
        seed: cfg.seed,
        ..MoreCapableCheck::default()
    };
    let report = is_more_capable(&pair, &check, cfg.log_base, cfg.tol)?;
    println!("points_tested={}", report.points_tested);
    println!("min_gap={}", fmt_real(report.min_gap));
    match report.verdict {
        MoreCapableVerdict::Holds => {
            println!("verdict=holds");
            Ok(())
        }
        MoreCapableVerdict::Violated { witness } => {
            let w: Vec<String> = witness.probs().iter().map(|&p| fmt_real(p)).collect();
            println!("verdict=violated");
            println!("witness=[{}]", w.join(","));
            Err(Failure::Check(format!(
                "I(X;Y1) < I(X;Y2) at P_X = [{}]",
                w.join(",")
            )))
        }
    }
}

fn oracle_compare(
    cfg: &RunConfig,
    spec: &ChannelSpec,
    c12: f64,
    grid: GridSpec,
    budget: f64,
) -> Result<(), Failure> {
    if spec.family != Family::Becbsc {
        return Err(Failure::Invalid(
            "oracle-compare needs a becbsc channel; the gaussian pair has a continuous input"
                .into(),
        ));
    }
    let fam = BecBscBC::new(spec.a, spec.b, cfg.log_base)?.family(c12)?;
    let pair = ChannelPair::new(make_bec(spec.a)?, make_bsc(spec.b)?)?;
    let oracle = oracle_regions(&pair, c12, &grid, cfg.log_base)?;
    for w in &oracle.warnings {
        eprintln!("warning: {w}");
    }
    let cmp = compare_with_family(&oracle, &fam, cfg.grid_size, cfg.tol)?;
    announce(&cfg.write_table("oracle_inner", oracle.inner.points())?);
    announce(&cfg.write_table("oracle_outer", oracle.outer.points())?);
    let meta =
        serde_json::to_string_pretty(&oracle.meta(&grid)).map_err(coopbc_core::Error::from)?;
    announce(&cfg.write("meta.json", &(meta + "\n"))?);
    println!("evaluations={}", oracle.evaluations);
    println!("inner_deviation={}", fmt_real(cmp.inner_deviation));
    println!("outer_deviation={}", fmt_real(cmp.outer_deviation));
    println!("inner_excess={}", fmt_real(cmp.inner_excess));
    println!("outer_excess={}", fmt_real(cmp.outer_excess));
    if cmp.inner_excess > ORACLE_EXCESS_TOL || cmp.outer_excess > ORACLE_EXCESS_TOL {
        return Err(Failure::Check(
            "oracle frontier lies above the parametric bound".into(),
        ));
    }
    if cmp.inner_deviation > budget || cmp.outer_deviation > budget {
        return Err(Failure::Check(format!(
            "deviation {} exceeds budget {budget}",
            cmp.inner_deviation.max(cmp.outer_deviation)
        )));
    }
    Ok(())
}

fn sweep(
    cfg: &RunConfig,
    spec: &ChannelSpec,
    c12: Option<Vec<f64>>,
    points: usize,
) -> Result<(), Failure> {
    let bc = Bc::new(spec, cfg.log_base)?;
    let grid = match c12 {
        Some(list) => list,
        None if points == 0 => return Err(Failure::Invalid("--points must be positive".into())),
        None if points == 1 => vec![0.0],
        None => (0..points)
            .map(|k| bc.max_c12() * k as f64 / (points - 1) as f64)
            .collect(),
    };
    let rows = sweep_thresholds(|c| bc.family(c), &grid, cfg.tol)?;
    announce(&cfg.write_table("thresholds", &rows)?);
    if !thresholds_strictly_decreasing(&rows) {
        return Err(Failure::Check(
            "alpha_th and R1_th are not strictly decreasing in C12".into(),
        ));
    }
    Ok(())
}

fn need(value: Option<f64>, flag: &str, channel: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Invalid(format!("--channel {channel} needs {flag}")))
}

fn simulate_cmd(cfg: &RunConfig, a: &SimulateArgs) -> Result<(), Failure> {
    let (channel, input_law) = match a.channel {
        Family::Becbsc => {
            let ch = SimChannel::BecBsc {
                tau1: need(a.tau1, "--tau1", "becbsc")?,
                p2: need(a.p2, "--p2", "becbsc")?,
            };
            let law = match (&a.input_law, a.q) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path).map_err(|e| {
                        Failure::Invalid(format!("cannot read {}: {e}", path.display()))
                    })?;
                    serde_json::from_str::<AuxiliaryJoint>(&text)
                        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?
                }
                (None, Some(q)) => AuxiliaryJoint::symmetric_binary(q)?,
                (None, None) => {
                    return Err(Failure::Invalid(
                        "--channel becbsc needs --input-law or --q".into(),
                    ))
                }
            };
            (ch, InputLaw::Discrete(law))
        }
        Family::Gaussian => {
            let ch = SimChannel::Gaussian {
                s1: need(a.s1, "--s1", "gaussian")?,
                s2: need(a.s2, "--s2", "gaussian")?,
            };
            let alpha = need(a.power_split, "--power-split", "gaussian")?;
            (ch, InputLaw::Gaussian { alpha })
        }
    };
    let code = CodeConfig {
        n: a.n,
        r1: a.r1,
        r2: a.r2,
        c12: a.c12,
        input_law,
        seed: cfg.seed,
        budget: a.budget,
        base: cfg.log_base,
    };
    code.validate()?;
    let report = simulate(&code, channel, a.trials)?;
    let json =
        serde_json::to_string_pretty(&report.rounded()).map_err(coopbc_core::Error::from)? + "\n";
    print!("{json}");
    announce(&cfg.write("sim_report.json", &json)?);
    announce(&cfg.write("sim_report.csv", &Format::Csv.write(&[report])?)?);
    Ok(())
}
