//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Run with
//! `cargo test -p tradeforge-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tradeforge::combinatorics::all_blocks;
use tradeforge::halving::{ak_halving, structured_partition_default};
use tradeforge::kernel::{materialize_w, probe_conjectures, standard_basis, ExactMatrix};
use tradeforge::{
    apply_w, binomial, cycle_trade, default_labelling, foundation, hill_climb_partition,
    is_halving, is_simple, is_trade, minimal_trade, partition_halving, sum_decomposition,
    v10_trade, ak_companion, IndexCycle, SearchConfig, SignedCollection, TradeDecomposition,
    TradeKind,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed > limit {
        return Err(format!("{label} took {elapsed:?}, limit {limit:?}"));
    }
    Ok(())
}

fn check_decomposition(h: &SignedCollection, d: &TradeDecomposition) -> Result<(), String> {
    ensure!(is_halving(h), "sum is not a halving");
    ensure!(d.pairwise_disjoint(), "constituents overlap");
    ensure!(d.partitions_complete_design(), "supports do not partition C(X,3)");
    ensure!(
        sum_decomposition(d).map_err(|e| e.to_string())? == *h,
        "constituents do not sum to the halving"
    );
    Ok(())
}

fn volume_identities() -> Outcome {
    let mut notes = Vec::new();
    for (v, minimal, c6, c8, vol) in [(14u32, 35, 7, 0, 182u64), (22, 165, 13, 4, 770)] {
        let start = Instant::now();
        let (h, d) = structured_partition_default(&default_labelling(v).unwrap())
            .map_err(|e| e.to_string())?;
        check_decomposition(&h, &d)?;
        let elapsed = start.elapsed();
        within(&format!("v={v}"), elapsed, Duration::from_secs(1))?;
        let got = (
            d.count(TradeKind::Minimal),
            d.count(TradeKind::Cycle6),
            d.count(TradeKind::Cycle8),
        );
        ensure!(got == (minimal, c6, c8), "v={v}: counts {got:?}");
        ensure!(d.len() == minimal + c6 + c8, "v={v}: unexpected constituent kinds");
        let pos = h.iter().filter(|(_, c)| *c > 0).count() as u64;
        ensure!(pos == vol, "v={v}: volume {pos}, expected {vol}");
        let by_parts = 4 * minimal as u64 + 6 * c6 as u64 + 8 * c8 as u64;
        ensure!(by_parts == vol, "v={v}: 4*{minimal}+6*{c6}+8*{c8} = {by_parts}");
        notes.push(format!("v={v}: {minimal}+{c6}+{c8} -> {vol} in {elapsed:.0?}"));
    }
    Ok(notes.join("; "))
}

fn partition_identity() -> Outcome {
    let start = Instant::now();
    for v in [6u32, 10, 14, 18, 22, 26] {
        let (h, d) = partition_halving(&default_labelling(v).unwrap()).map_err(|e| e.to_string())?;
        check_decomposition(&h, &d)?;
        let total = binomial(u64::from(v), 3).unwrap();
        let pos = h.iter().filter(|(_, c)| *c > 0).count() as u64;
        ensure!(2 * pos == total, "v={v}: volume {pos}");
        let m = u64::from(v / 2);
        let identity = binomial(m, 3).unwrap() * 4 + binomial(m, 2).unwrap() * 2;
        ensure!(identity == pos, "v={v}: counting identity {identity} != {pos}");
    }
    let elapsed = start.elapsed();
    within("all orders", elapsed, Duration::from_secs(5))?;
    Ok(format!("v in 6..=26 step 4 in {elapsed:.0?}"))
}

fn golden_fixtures() -> Outcome {
    let golden_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: [(&str, &[&str]); 5] = [
        ("t235.txt", &["trade", "v10", "--v", "10", "--alpha", "2,3,5", "--one-based"]),
        ("v10_halving.txt", &["gen", "--method", "v10", "--v", "10", "--one-based"]),
        ("ten_point_partition.txt", &["fixture", "ten-point-partition", "--one-based"]),
        ("sts7.txt", &["fixture", "sts7"]),
        ("sts9.txt", &["fixture", "sts9"]),
    ];
    for (file, args) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_tradeforge"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "{file}: exit {:?}", out.status);
        let want = std::fs::read(golden_dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        ensure!(out.stdout == want, "{file}: output differs from golden file");
    }
    let d = tradeforge::fixtures::ten_point_partition().map_err(|e| e.to_string())?;
    ensure!(d.len() == 15, "fixture has {} trades", d.len());
    let h = sum_decomposition(&d).map_err(|e| e.to_string())?;
    check_decomposition(&h, &d)?;
    let t235 = v10_trade([1, 2, 4], &default_labelling(10).unwrap()).map_err(|e| e.to_string())?;
    ensure!(
        is_simple(&t235) && positive_blocks(&t235) == 10 && foundation(&t235).len() == 6,
        "T_235 shape"
    );
    Ok("5 golden files byte-identical; ten-point partition is a halving".into())
}

fn ak_algorithm() -> Outcome {
    let mut counts = Vec::new();
    for v in [6u32, 10, 14] {
        let start = Instant::now();
        let out = ak_halving(v, 1_000_000).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure!(is_halving(&out.halving), "v={v}: not a halving");
        if v == 14 {
            within("v=14", elapsed, Duration::from_secs(10))?;
        }
        println!(
            "    ak v={v}: iterations={} additions={} subtractions={} ({elapsed:.0?})",
            out.iterations, out.additions, out.subtractions
        );
        counts.push(format!("v={v}:{}", out.iterations));
    }
    Ok(format!("iterations {}", counts.join(" ")))
}

fn hill_climbing() -> Outcome {
    let start = Instant::now();
    let mut ok = 0;
    for seed in 1..=10u64 {
        let cfg = SearchConfig {
            seed,
            ..SearchConfig::default()
        };
        match hill_climb_partition(&cfg) {
            Ok(out) => {
                let d = &out.decomposition;
                ensure!(d.len() == 15, "seed {seed}: {} trades", d.len());
                ensure!(
                    d.constituents.iter().all(|c| c.kind == TradeKind::Minimal),
                    "seed {seed}: non-minimal constituent"
                );
                let h = sum_decomposition(d).map_err(|e| e.to_string())?;
                check_decomposition(&h, d).map_err(|e| format!("seed {seed}: {e}"))?;
                ok += 1;
            }
            Err(e) => println!("    seed {seed}: {e}"),
        }
    }
    let elapsed = start.elapsed();
    within("10 seeds", elapsed, Duration::from_secs(30))?;
    ensure!(ok >= 8, "only {ok}/10 seeds succeeded");
    Ok(format!("{ok}/10 seeds in {elapsed:.0?}"))
}

fn dense_product(w: &ExactMatrix, f: &SignedCollection) -> Vec<BigRational> {
    let x: Vec<BigRational> = all_blocks(f.v(), f.k())
        .map(|b| BigRational::from_integer(BigInt::from(f.coefficient(&b))))
        .collect();
    (0..w.rows())
        .map(|r| {
            w.row(r)
                .iter()
                .zip(&x)
                .fold(BigRational::from_integer(0.into()), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (t, k, v) in [(2usize, 3usize, 6u32), (2, 3, 7), (1, 3, 7)] {
        let w = materialize_w(t, k, v).map_err(|e| e.to_string())?;
        for trial in 0..100 {
            let density = rng.gen_range(0.05..1.0);
            let mut entries = Vec::new();
            for b in all_blocks(v, k) {
                if rng.gen_bool(density) {
                    entries.push((b, rng.gen_range(-5i64..=5)));
                }
            }
            let f = SignedCollection::from_blocks(v, k, entries).map_err(|e| e.to_string())?;
            let sparse = apply_w(t, &f).map_err(|e| e.to_string())?;
            let dense = dense_product(&w, &f);
            let sparse: Vec<BigRational> = sparse
                .counts
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect();
            ensure!(sparse == dense, "({t},{k},{v}) trial {trial} differs");
        }
    }
    Ok("300 random collections agree".into())
}

fn kernel_basis() -> Outcome {
    let mut notes = Vec::new();
    for v in [6u32, 7, 8] {
        let b = standard_basis(2, 3, v).map_err(|e| e.to_string())?;
        let w = materialize_w(2, 3, v).map_err(|e| e.to_string())?;
        ensure!(b.annihilated_by(&w).map_err(|e| e.to_string())?, "v={v}: W S != 0");
        let want = binomial(u64::from(v), 3).unwrap() - binomial(u64::from(v), 2).unwrap();
        ensure!(b.num_columns() as u64 == want, "v={v}: {} columns", b.num_columns());
        // Observations only.
        let p = probe_conjectures(&b).map_err(|e| e.to_string())?;
        println!(
            "    probe v={v}: sign_constant_rows={} violations={} nowhere_zero_row={} ({} rows)",
            p.sign_constant_rows,
            p.violations.len(),
            p.nowhere_zero_row,
            p.nowhere_zero_rows.len()
        );
        notes.push(format!("v={v}:{want}"));
    }
    Ok(format!("W S = 0, columns {}", notes.join(" ")))
}

fn positive_blocks(f: &SignedCollection) -> usize {
    f.iter().filter(|(_, c)| *c > 0).count()
}

fn trade_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0usize;
    let mut check = |name: &str, f: &SignedCollection, minimal: bool| -> Result<(), String> {
        ensure!(is_trade(2, f), "{name}: not a trade");
        let (vol, found) = (positive_blocks(f), foundation(f).len());
        ensure!(vol >= 4 && found >= 6, "{name}: volume {vol}, foundation {found}");
        if minimal {
            ensure!(vol == 4 && found == 6, "{name}: minimal but volume {vol}, foundation {found}");
        }
        checked += 1;
        Ok(())
    };
    for v in [6u32, 10, 14] {
        for _ in 0..50 {
            let mut pts: Vec<u32> = (0..v).collect();
            for i in 0..6 {
                let j = rng.gen_range(i..v as usize);
                pts.swap(i, j);
            }
            let f = minimal_trade([pts[0], pts[1], pts[2]], [pts[3], pts[4], pts[5]], v)
                .map_err(|e| e.to_string())?;
            check("minimal", &f, true)?;
        }
        let l = default_labelling(v).unwrap();
        let m = l.size();
        for len in 3..=m {
            let mut idx: Vec<usize> = (0..m).collect();
            for i in 0..len {
                let j = rng.gen_range(i..m);
                idx.swap(i, j);
            }
            idx.truncate(len);
            let c = IndexCycle::new(idx).map_err(|e| e.to_string())?;
            check("cycle", &cycle_trade(&c.walk(), &l).map_err(|e| e.to_string())?, false)?;
        }
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    check("v10", &v10_trade([a, b, c], &l).map_err(|e| e.to_string())?, false)?;
                }
            }
        }
        // The companion rule is undefined for some blocks; check the rest.
        for block in all_blocks(v, 3).take(200) {
            if let Ok(t) = ak_companion(&block, v) {
                check("ak companion", &t, true)?;
            }
        }
        let (_, d) = partition_halving(&l).map_err(|e| e.to_string())?;
        for c in &d.constituents {
            check(c.kind.as_str(), &c.trade, c.kind == TradeKind::Minimal)?;
        }
        let (_, d) = structured_partition_default(&l).map_err(|e| e.to_string())?;
        for c in &d.constituents {
            check(c.kind.as_str(), &c.trade, c.kind == TradeKind::Minimal)?;
        }
    }
    let d = hill_climb_partition(&SearchConfig::default()).map_err(|e| e.to_string())?;
    for c in &d.decomposition.constituents {
        check("hillclimb", &c.trade, true)?;
    }
    Ok(format!("{checked} constructor outputs within bounds"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("volume identities of the structured partition", volume_identities),
        ("partition halving counting identity", partition_identity),
        ("golden fixtures", golden_fixtures),
        ("lexicographic AK algorithm", ak_algorithm),
        ("hill climbing success rate", hill_climbing),
        ("sparse/dense inclusion oracle", oracle_equivalence),
        ("standard kernel basis", kernel_basis),
        ("trade volume and foundation bounds", trade_bounds),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        match result {
            Ok(note) => println!("PASS {}: {name} ({note})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name} ({why})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
