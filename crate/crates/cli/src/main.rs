use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ladder_core::generate::{random_suite, SuiteSpec};
use ladder_core::influence::{linearity, relation_matrix, transitivity_violations, PairClass, RelationMatrix, RelationReport};
use ladder_core::injection::{verify_injection_with, InjectionReport, PsiReading};
use ladder_core::pivot::{theorem2_from, PivotContext, PivotReport};
use ladder_core::sim::{run_ladder_on, Ladder};
use ladder_core::verify::{verify_games, Claim, Verdict, VerificationSuiteResult, VerifyOptions};
use ladder_core::{builtin, io, Config, GameLadder, LadderError, Orientation};

const ENUM_CAP_VAR: &str = "LADDER_ENUM_CAP";

#[derive(Parser)]
#[command(name = "ladder", version, about = "Influence relations and pivot counts for game ladders")]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Influence relation, linearity, transitivity and layers.
    Analyze {
        /// Game file, or builtin:NAME.
        game: String,
        #[arg(long, default_value = "canonical")]
        config: Config,
    },
    /// Pivot counts per level and the count-monotonicity check.
    Pivots {
        game: String,
        /// Count a single level only.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value = "canonical")]
        config: Config,
    },
    /// Run claim checks on a game and/or a seeded suite of random games.
    Verify {
        game: Option<String>,
        #[arg(long, default_value = "all")]
        claims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        random_games: usize,
        #[arg(long, default_value_t = 3)]
        max_players: usize,
        #[arg(long, default_value_t = 3)]
        max_levels: u8,
        #[arg(long, default_value = "canonical")]
        config: Config,
        /// Check the swap correspondence for players P, Q at level I instead.
        #[arg(long, num_args = 3, value_names = ["P", "Q", "I"])]
        injection: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t = Psi::Relative)]
        psi: Psi,
    },
    /// Run the challenge ladder and print its trace.
    Simulate {
        game: String,
        /// Initial ladder from the top rung down, e.g. 3,1,2.
        #[arg(long)]
        initial: Option<String>,
        #[arg(long, default_value_t = 1000)]
        max_rounds: usize,
    },
    /// Write the output table of a game.
    Export { game: String },
    /// Read an output table and print the game as JSON.
    Import {
        table: String,
        #[arg(long, value_enum, default_value_t = Direction::NonDecreasing)]
        orientation: Direction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Psi {
    Relative,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    NonDecreasing,
    NonIncreasing,
}

enum Failure {
    Claims,
    Input(String),
    Capability(String),
}

impl From<LadderError> for Failure {
    fn from(e: LadderError) -> Self {
        match e {
            LadderError::DegenerateRange | LadderError::EnumerationLimit { .. } => Failure::Capability(e.to_string()),
            LadderError::InternalInconsistency(_) | LadderError::NoPivot { .. } | LadderError::MultiplePivots { .. } => {
                eprintln!("claim violated: {e}");
                Failure::Claims
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Capability(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Analyze { game, config } => analyze(&load(game)?, *config, cli.json),
        Command::Pivots { game, level, config } => pivots(&load(game)?, *level, *config, cli.json),
        Command::Verify {
            game,
            claims,
            seed,
            random_games,
            max_players,
            max_levels,
            config,
            injection,
            psi,
        } => {
            if let Some(args) = injection {
                let name = game
                    .as_deref()
                    .ok_or_else(|| Failure::Input("--injection needs a game".into()))?;
                return injection_cmd(&load(name)?, args, *config, *psi, cli.json);
            }
            let mut games = Vec::new();
            if let Some(name) = game {
                games.push((name.clone(), load(name)?));
            }
            let spec = SuiteSpec::new(*seed, *random_games, *max_players, *max_levels, Orientation::NonDecreasing);
            let cap = enum_cap()?;
            for (idx, g) in random_suite(&spec).into_iter().enumerate() {
                let g = match cap {
                    Some(c) => g.with_enum_cap(c),
                    None => g,
                };
                games.push((format!("random#{}", idx + 1), g));
            }
            if games.is_empty() {
                return Err(Failure::Input("nothing to verify: pass a game or --random-games".into()));
            }
            let claims = Claim::parse_list(claims)?;
            let opts = VerifyOptions {
                config: *config,
                ..VerifyOptions::default()
            };
            let result = verify_games(&games, &claims, &opts);
            let out = if cli.json {
                json(&result)
            } else {
                render_verify(&result)
            };
            if result.all_passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Claims)
            }
        }
        Command::Simulate {
            game,
            initial,
            max_rounds,
        } => simulate(&load(game)?, initial.as_deref(), *max_rounds, cli.json),
        Command::Export { game } => Ok(io::export_table(&load(game)?)?),
        Command::Import { table, orientation } => {
            let text = read_file(table)?;
            let orientation = match orientation {
                Direction::NonDecreasing => Orientation::NonDecreasing,
                Direction::NonIncreasing => Orientation::NonIncreasing,
            };
            let game = io::import_table(&text, orientation)?;
            Ok(format!("{}\n", io::game_to_json(&game)))
        }
    }
}

fn enum_cap() -> Result<Option<u64>, Failure> {
    match std::env::var(ENUM_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Input(format!("{ENUM_CAP_VAR}={v:?} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn load(address: &str) -> Result<GameLadder, Failure> {
    let game = match address.strip_prefix("builtin:") {
        Some(name) => builtin::by_name(name)?,
        None => io::parse_game(&read_file(address)?).map_err(|e| Failure::Input(format!("{address}: {e}")))?,
    };
    Ok(match enum_cap()? {
        Some(cap) => game.with_enum_cap(cap),
        None => game,
    })
}

fn json<T: serde::Serialize>(value: &T) -> String {
    format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize"))
}

fn header(game: &GameLadder, config: Config) -> String {
    format!(
        "{} players, {} positions, {}; read as {} ({config})\n",
        game.players(),
        game.levels(),
        game.orientation().as_str(),
        config.orientation().as_str(),
    )
}

fn analyze(game: &GameLadder, config: Config, as_json: bool) -> Outcome {
    let m = relation_matrix(&config.prepare(game))?;
    if as_json {
        return Ok(json(&RelationReport::new(&m)));
    }
    let n = m.players();
    let mut out = header(game, config);
    out.push_str("\nrow vs column: > dominates, < dominated, ~ equivalent, . incomparable\n    ");
    for q in 0..n {
        write!(out, "{:>3}", q + 1).unwrap();
    }
    out.push('\n');
    for p in 0..n {
        write!(out, "{:>4}", p + 1).unwrap();
        for q in 0..n {
            let c = match m.class(p, q) {
                PairClass::Dominates => '>',
                PairClass::Dominated => '<',
                PairClass::Equivalent => '~',
                PairClass::Incomparable => '.',
            };
            write!(out, "{c:>3}").unwrap();
        }
        out.push('\n');
    }
    out.push('\n');
    for p in 0..n {
        for q in p + 1..n {
            let line = match m.class(p, q) {
                PairClass::Dominates => format!("{} ≻ {}", p + 1, q + 1),
                PairClass::Dominated => format!("{} ≻ {}", q + 1, p + 1),
                PairClass::Equivalent => format!("{} ~ {}", p + 1, q + 1),
                PairClass::Incomparable => format!("{} and {} incomparable", p + 1, q + 1),
            };
            writeln!(out, "  {line}").unwrap();
        }
    }
    out.push('\n');
    match linearity(&m).witness {
        Some((p, q)) => writeln!(out, "linear: no, not complete; witness ({},{})", p + 1, q + 1).unwrap(),
        None => out.push_str("linear: yes\n"),
    }
    let violations = transitivity_violations(&m);
    if violations.is_empty() {
        out.push_str("transitivity violations: none\n");
    } else {
        let list: Vec<String> = violations
            .iter()
            .map(|(p, q, r)| format!("({},{},{})", p + 1, q + 1, r + 1))
            .collect();
        writeln!(out, "transitivity violations: {}", list.join(" ")).unwrap();
    }
    if let Ok(layers) = ladder_core::influence::layers_of(&m) {
        let list: Vec<String> = layers.layers.iter().map(|l| player_set(l)).collect();
        writeln!(out, "layers: [{}]", list.join(", ")).unwrap();
    }
    Ok(out)
}

fn player_set(players: &[usize]) -> String {
    let names: Vec<String> = players.iter().map(|p| (p + 1).to_string()).collect();
    format!("{{{}}}", names.join(","))
}

fn pivots(game: &GameLadder, level: Option<usize>, config: Config, as_json: bool) -> Outcome {
    let oriented = config.prepare(game);
    let ctx = PivotContext::new(&oriented)?;
    let table = ctx.pivot_counts(level)?;
    let m = relation_matrix(&oriented)?;
    let t2 = theorem2_from(&m, &table, config);
    if as_json {
        return Ok(json(&PivotReport::new(&table, &t2)));
    }
    let mut out = header(game, config);
    let levels: Vec<String> = table
        .levels
        .iter()
        .enumerate()
        .map(|(i, z)| format!("z{}={z}", i + 1))
        .collect();
    writeln!(out, "output levels: {}", levels.join(" ")).unwrap();
    out.push_str("pivot counts:\n");
    for (row, i) in table.counts.iter().zip(&table.level_indices) {
        let cells: Vec<String> = row.iter().enumerate().map(|(p, c)| format!("{}:{c}", p + 1)).collect();
        let sum: u64 = row.iter().sum();
        let check = if sum == table.total_per_level { "ok" } else { "MISMATCH" };
        writeln!(out, "  i={i}: {{{}}}  sum {sum} = n!·jⁿ {} {check}", cells.join(", "), table.total_per_level).unwrap();
    }
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    writeln!(out, "theorem2 ({config}): {} pairs with p ≽ q", t2.pairs_checked).unwrap();
    writeln!(out, "  as_stated: {}", verdict(t2.as_stated)).unwrap();
    for v in &t2.violations {
        writeln!(
            out,
            "    witness ({},{},i={}): counts {} < {}",
            v.p + 1,
            v.q + 1,
            v.level,
            v.count_p,
            v.count_q
        )
        .unwrap();
    }
    writeln!(out, "  reversed: {}", verdict(t2.reversed)).unwrap();
    Ok(out)
}

fn render_verify(result: &VerificationSuiteResult) -> String {
    let mut out = format!("{} game(s), {} configuration\n", result.games, result.config);
    for c in &result.claims {
        let status = match &c.verdict {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail => "FAIL".to_string(),
            Verdict::Skipped(reason) => format!("skipped ({reason})"),
        };
        writeln!(
            out,
            "{}: {status} [{} checked, {} skipped]",
            c.claim, c.games_checked, c.games_skipped
        )
        .unwrap();
        for w in &c.witnesses {
            writeln!(out, "    {w}").unwrap();
        }
        if c.witnesses_total > c.witnesses.len() {
            writeln!(out, "    ... {} more", c.witnesses_total - c.witnesses.len()).unwrap();
        }
    }
    out
}

fn injection_cmd(game: &GameLadder, args: &[usize], config: Config, psi: Psi, as_json: bool) -> Outcome {
    let (p, q, i) = (args[0], args[1], args[2]);
    if p == 0 || q == 0 {
        return Err(Failure::Input("players are numbered from 1".into()));
    }
    let oriented = config.prepare(game);
    let ctx = PivotContext::new(&oriented)?;
    let m = relation_matrix(&oriented)?;
    let reading = match psi {
        Psi::Relative => PsiReading::OrientationRelative,
        Psi::Literal => PsiReading::Literal,
    };
    let rep = verify_injection_with(&ctx, &m, p - 1, q - 1, i, config, reading)?;
    let out = if as_json { json(&rep) } else { render_injection(&rep) };
    if config == Config::Canonical && !rep.is_clean() {
        print!("{out}");
        return Err(Failure::Claims);
    }
    Ok(out)
}

fn render_injection(rep: &InjectionReport) -> String {
    let mut out = format!(
        "p={} q={} level {} ({}, {:?}); p ≽ q: {}\n",
        rep.p,
        rep.q,
        rep.level,
        rep.config,
        rep.reading,
        if rep.relation_holds { "yes" } else { "no" }
    );
    writeln!(
        out,
        "domain |R_iq| = {}, image = {}, target |R_ip| = {}",
        rep.domain_size, rep.image_size, rep.target_size
    )
    .unwrap();
    writeln!(out, "well-definedness failures: {}", rep.well_defined_failures.len()).unwrap();
    for f in rep.well_defined_failures.iter().take(10) {
        writeln!(out, "    {} -> {}", f.source, f.image).unwrap();
    }
    writeln!(out, "collisions: {}", rep.injectivity_collisions.len()).unwrap();
    for c in rep.injectivity_collisions.iter().take(10) {
        writeln!(out, "    {} and {} -> {}", c.first, c.second, c.image).unwrap();
    }
    out
}

fn simulate(game: &GameLadder, initial: Option<&str>, max_rounds: usize, as_json: bool) -> Outcome {
    let n = game.players();
    let ladder = match initial {
        None => Ladder::identity(n),
        Some(text) => {
            let rungs = text
                .split(',')
                .map(|s| match s.trim().parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(Failure::Input(format!("bad player {s:?} in --initial"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if rungs.len() != n {
                return Err(Failure::Input(format!("--initial lists {} players, the game has {n}", rungs.len())));
            }
            Ladder::new(rungs)?
        }
    };
    let m: RelationMatrix = relation_matrix(&Config::Canonical.prepare(game))?;
    let trace = run_ladder_on(&m, ladder, max_rounds)?;
    if as_json {
        return Ok(trace.to_json_lines());
    }
    let mut out = format!("start {}\n", trace.initial);
    for e in &trace.events {
        writeln!(out, "round {}: {} displaces {}", e.round, e.challenger + 1, e.incumbent + 1).unwrap();
    }
    writeln!(
        out,
        "final {} after {} round(s), {} swap(s): {:?}",
        trace.final_ladder,
        trace.rounds,
        trace.events.len(),
        trace.termination
    )
    .unwrap();
    Ok(out)
}
