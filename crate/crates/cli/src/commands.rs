use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use tradeforge::halving::{
    ak_halving, eulerian_circuit_seeded, hill_climb_partition, partition_halving,
    partition_halving_with, structured_case, structured_partition, v10_halving, IndexBase,
    SearchConfig, StructuredCase, TradeDecomposition, DEFAULT_SEED,
};
use tradeforge::io::{self as cio, Format, Header};
use tradeforge::kernel::{probe_conjectures, standard_basis};
use tradeforge::sts::{default_sts, format_sts, parse_sts, sts_generate, verify_sts, PairPartition};
use tradeforge::trades::{ak_companion, cycle_trade, minimal_trade, v10_trade, IndexCycle};
use tradeforge::{default_labelling, inclusion, Block, Error, SignedCollection};

use crate::{
    BasisArgs, FixtureArgs, FixtureName, GenArgs, Method, OutputFormat, OutputOpts, StsArgs,
    TradeArgs, TradeCommand, VerifyArgs,
};

pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SEARCH_CAP: u8 = 3;

pub const MAX_ITERS_ENV: &str = "TRADEFORGE_MAX_ITERS";

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn property(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PROPERTY,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchCap { .. } => EXIT_SEARCH_CAP,
            Error::Verification(_) | Error::Internal(_) | Error::Overflow(_) => EXIT_PROPERTY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

fn format_of(f: OutputFormat) -> Format {
    match f {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    }
}

fn write_collection(
    o: &OutputOpts,
    header: &Header,
    f: &SignedCollection,
    d: Option<&TradeDecomposition>,
) -> CmdResult {
    let text = cio::write(format_of(o.format), header, f, d, o.one_based);
    emit(o.out.as_deref(), &text)
}

fn env_max_iters() -> Result<Option<u64>, Failure> {
    match std::env::var(MAX_ITERS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::usage(format!("{MAX_ITERS_ENV}={s:?} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn parse_pairs(text: &str, size: usize) -> Result<PairPartition, Failure> {
    let mut pairs = Vec::new();
    for part in text.split(';').filter(|p| !p.trim().is_empty()) {
        let nums: Vec<usize> = part
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::usage(format!("bad pair {part:?}")))?;
        let [i, j] = nums[..] else {
            return Err(Failure::usage(format!("bad pair {part:?}")));
        };
        pairs.push((i, j));
    }
    Ok(PairPartition::new(pairs, size)?)
}

fn shift_in(x: u32, one_based: bool) -> Result<u32, Failure> {
    if one_based {
        x.checked_sub(1)
            .ok_or_else(|| Failure::usage("0 is not a valid one-based value"))
    } else {
        Ok(x)
    }
}

pub fn gen(a: GenArgs) -> CmdResult {
    let v = a.v;
    let one_based = a.output.one_based;
    if a.method == Method::Hillclimb && v != 10 {
        return Err(Failure::usage(format!("hillclimb is defined for v = 10 only, got v={v}")));
    }
    if !tradeforge::halving::admissible_halving_order(v) {
        return Err(Failure::usage(format!(
            "no (2,3,{v})-halving construction: v must be 4n+2 with n >= 1"
        )));
    }
    let env_cap = env_max_iters()?;
    let seed = a.seed.unwrap_or(DEFAULT_SEED);
    let mut header = Header {
        v,
        k: 3,
        t: Some(2),
        method: None,
        seed: None,
    };
    let labelling = default_labelling(v)?;
    let (halving, decomposition): (SignedCollection, Option<TradeDecomposition>) = match a.method {
        Method::Ak => {
            header.method = Some("ak".into());
            let cap = a.max_iters.or(env_cap).unwrap_or(1_000_000);
            let out = ak_halving(v, cap)?;
            eprintln!(
                "ak: v={v} iterations={} additions={} subtractions={}",
                out.iterations, out.additions, out.subtractions
            );
            (out.halving, None)
        }
        Method::V10 => {
            header.method = Some("v10".into());
            let base = if one_based { IndexBase::One } else { IndexBase::Zero };
            let (h, d) = v10_halving(&labelling, base)?;
            (h, Some(d))
        }
        Method::Partition => {
            header.method = Some("partition".into());
            let (h, d) = if a.random_circuit {
                header.seed = Some(seed);
                let walk = eulerian_circuit_seeded(labelling.size(), seed)?;
                partition_halving_with(&labelling, &walk)?
            } else {
                partition_halving(&labelling)?
            };
            (h, Some(d))
        }
        Method::Structured => {
            header.method = Some("structured".into());
            let (order, npairs) = match structured_case(v)? {
                StructuredCase::Full { sts_order } => (sts_order, 0),
                StructuredCase::Patched { sts_order, pairs } => (sts_order, pairs),
            };
            let sts = match &a.sts_file {
                Some(p) => parse_sts(&read_input(p)?, one_based, Some(order))?,
                None => default_sts(order)?,
            };
            let pairs = a
                .pairs
                .as_deref()
                .map(|s| parse_pairs(s, 2 * npairs))
                .transpose()?;
            let (h, d) = structured_partition(&labelling, &sts, pairs.as_ref())?;
            (h, Some(d))
        }
        Method::Hillclimb => {
            header.method = Some("hillclimb".into());
            header.seed = Some(seed);
            let defaults = SearchConfig::default();
            let cfg = SearchConfig {
                seed,
                max_iterations: a.max_iters.or(env_cap).unwrap_or(defaults.max_iterations),
                restart_limit: a.restarts.unwrap_or(defaults.restart_limit),
                candidate_window: a.window,
                jobs: a.jobs,
            };
            let out = hill_climb_partition(&cfg)?;
            eprintln!(
                "hillclimb: seed={seed} attempt={} iterations={} total_iterations={}",
                out.attempt, out.iterations, out.total_iterations
            );
            let h = tradeforge::sum_decomposition(&out.decomposition)?;
            (h, Some(out.decomposition))
        }
    };
    if !inclusion::is_halving(&halving) {
        return Err(Failure::property(format!("{:?} output failed the halving check", a.method)));
    }
    let d = if a.decompose { decomposition.as_ref() } else { None };
    if a.decompose && d.is_none() {
        eprintln!("note: the ak method has no decomposition; writing the halving only");
    }
    write_collection(&a.output, &header, &halving, d)
}

fn print_report(r: &inclusion::CollectionReport, file: &cio::CollectionFile, json: bool) -> CmdResult {
    let d = file.constituents.as_ref();
    if json {
        let mut value = serde_json::to_value(r).expect("report serializes");
        if let Some(d) = d {
            value["constituents"] = serde_json::json!({
                "count": d.len(),
                "pairwise_disjoint": d.pairwise_disjoint(),
                "all_trades": d.constituents.iter().all(|c| inclusion::is_trade(2, &c.trade)),
            });
        }
        let mut s = serde_json::to_string_pretty(&value).expect("json");
        s.push('\n');
        return emit(None, &s);
    }
    let mut s = String::new();
    s.push_str(&format!("v: {}\nk: {}\nt: {}\nlambda: {}\n", r.v, r.k, r.t, r.lambda));
    s.push_str(&format!("support: {}\nvolume: {}\nbalanced: {}\n", r.support, r.volume, r.balanced));
    s.push_str(&format!("foundation: {}\nsimple: {}\n", r.foundation_size, r.is_simple));
    s.push_str(&format!("equation_holds: {}\nhalving: {}\n", r.equation_holds, r.is_halving));
    if let Some(d) = d {
        s.push_str(&format!(
            "constituents: {}\npairwise_disjoint: {}\n",
            d.len(),
            d.pairwise_disjoint()
        ));
    }
    emit(None, &s)
}

pub fn verify(a: VerifyArgs) -> CmdResult {
    let text = read_input(&a.file)?;
    let file = cio::parse_auto(&text, a.one_based)?;
    let lambda = a.lambda.unwrap_or(0);
    let report = inclusion::report(a.t, lambda, &file.collection, a.jobs)?;
    print_report(&report, &file, a.json)?;
    let shift = u32::from(a.one_based);
    let violation = || match &report.first_violation {
        Some((subset, count)) => {
            let subset: Vec<String> = subset.iter().map(|x| (x + shift).to_string()).collect();
            format!(
                "{}-subset {{{}}} covered {count} times, expected {lambda}",
                a.t,
                subset.join(" ")
            )
        }
        None if lambda > 0 => "negative coefficients present".to_string(),
        None => String::new(),
    };
    if a.halving {
        if !report.is_halving {
            let why = if !report.is_simple {
                "collection is not simple".to_string()
            } else if !report.equation_holds {
                violation()
            } else {
                format!("support {} does not cover all blocks", report.support)
            };
            return Err(Failure::property(format!("not a halving: {why}")));
        }
    } else if !report.equation_holds {
        let what = if lambda > 0 { "design" } else { "trade" };
        return Err(Failure::property(format!("not a {what}: {}", violation())));
    }
    Ok(())
}

pub fn sts(a: StsArgs) -> CmdResult {
    if let Some(path) = &a.check {
        let ts = parse_sts(&read_input(path)?, a.one_based, a.order)?;
        let ok = verify_sts(&ts);
        emit(
            None,
            &format!("order: {}\ntriples: {}\nsteiner: {ok}\n", ts.order(), ts.len()),
        )?;
        return if ok {
            Ok(())
        } else {
            Err(Failure::property("not a Steiner triple system"))
        };
    }
    let order = a.order.expect("clap requires --order without --check");
    let ts = sts_generate(order)?;
    emit(a.out.as_deref(), &format_sts(&ts, a.one_based))
}

pub fn basis(a: BasisArgs) -> CmdResult {
    let b = standard_basis(a.t, a.k, a.v)?;
    let value = if a.check_conjectures {
        let mut v = serde_json::to_value(probe_conjectures(&b)?).expect("json");
        v["kernel_verified"] = serde_json::Value::Bool(true);
        v
    } else {
        serde_json::json!({
            "t": a.t,
            "k": a.k,
            "v": a.v,
            "num_basis_columns": b.num_columns(),
            "kernel_verified": true,
        })
    };
    let mut s = serde_json::to_string_pretty(&value).expect("json");
    s.push('\n');
    emit(None, &s)
}

fn triple_u32(v: &[u32], one_based: bool) -> Result<[u32; 3], Failure> {
    if v.len() != 3 {
        return Err(Failure::usage(format!("expected 3 comma-separated values, got {}", v.len())));
    }
    Ok([
        shift_in(v[0], one_based)?,
        shift_in(v[1], one_based)?,
        shift_in(v[2], one_based)?,
    ])
}

fn triple_usize(v: &[usize], one_based: bool) -> Result<[usize; 3], Failure> {
    let t = triple_u32(&v.iter().map(|&x| x as u32).collect::<Vec<_>>(), one_based)?;
    Ok(t.map(|x| x as usize))
}

pub fn trade(a: TradeArgs) -> CmdResult {
    let ob = a.output.one_based;
    let (v, kind, f) = match &a.kind {
        TradeCommand::Minimal { v, a: top, b } => (
            *v,
            "minimal",
            minimal_trade(triple_u32(top, ob)?, triple_u32(b, ob)?, *v)?,
        ),
        TradeCommand::Cycle { v, cycle } => {
            let verts = cycle
                .iter()
                .map(|&i| shift_in(i as u32, ob).map(|x| x as usize))
                .collect::<Result<Vec<_>, _>>()?;
            let c = IndexCycle::new(verts)?;
            (*v, "cycle", cycle_trade(&c.walk(), &default_labelling(*v)?)?)
        }
        TradeCommand::V10 { v, alpha } => (
            *v,
            "v10",
            v10_trade(triple_usize(alpha, ob)?, &default_labelling(*v)?)?,
        ),
        TradeCommand::Companion { v, block } => {
            let b = Block::from_unsorted(triple_u32(block, ob)?.to_vec(), *v)?;
            (*v, "ak-companion", ak_companion(&b, *v)?)
        }
    };
    if !inclusion::is_trade(2, &f) {
        return Err(Failure::property(format!("{kind} construction is not a trade")));
    }
    let header = Header {
        v,
        k: 3,
        t: Some(2),
        method: Some(kind.into()),
        seed: None,
    };
    write_collection(&a.output, &header, &f, None)
}

pub fn fixture(a: FixtureArgs) -> CmdResult {
    match a.name {
        FixtureName::Sts7 | FixtureName::Sts9 => {
            let order = if matches!(a.name, FixtureName::Sts7) { 7 } else { 9 };
            let ts = default_sts(order)?;
            emit(a.output.out.as_deref(), &format_sts(&ts, a.output.one_based))
        }
        FixtureName::TenPointPartition => {
            let d = tradeforge::fixtures::ten_point_partition()?;
            let h = tradeforge::sum_decomposition(&d)?;
            let header = Header {
                v: 10,
                k: 3,
                t: Some(2),
                method: Some("fixture".into()),
                seed: None,
            };
            write_collection(&a.output, &header, &h, Some(&d))
        }
    }
}
