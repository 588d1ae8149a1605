//! Timed experiments: the minor-expansion vs elimination crossover walk and
//! the row-sorting speedup study, with CSV output.

use std::io::{Read, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::costmodel::c_m_exact;
use crate::det::{self, CostMeter, Deadline};
use crate::error::{Error, Result};
use crate::matrix::{gen_one_homogeneous, gen_sparse_linear, ExperimentConfig, SymMatrix};
use crate::poly::Polynomial;
use crate::rowsort::{sort_rows, sorted_minor_expansion, SortStrategy};

/// Fixed header row for a CSV record type.
pub trait CsvSchema {
    const HEADER: &'static [&'static str];
}

/// Writes the header followed by one row per record. An empty slice yields
/// a header-only document.
pub fn write_csv_to<T, W>(records: &[T], out: W) -> Result<()>
where
    T: Serialize + CsvSchema,
    W: Write,
{
    let mut w = csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(T::HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes CSV to `path` atomically: a temporary file in the same directory is
/// renamed over the destination once complete.
pub fn write_csv<T>(records: &[T], path: &Path) -> Result<()>
where
    T: Serialize + CsvSchema,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_csv_to(records, tmp.as_file_mut())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Reads records written by [`write_csv_to`], checking the header.
pub fn read_csv<T, R>(input: R) -> Result<Vec<T>>
where
    T: DeserializeOwned + CsvSchema,
    R: Read,
{
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(T::HEADER.iter().copied()) {
        return Err(Error::MatrixFormat {
            line: 1,
            msg: format!("unexpected CSV header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    r.deserialize().map(|rec| rec.map_err(Error::from)).collect()
}

/// Hex SHA-256 prefix of a polynomial's canonical text.
pub fn result_hash(p: &Polynomial) -> String {
    let digest = Sha256::digest(p.to_string().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// One algorithm's measurement within a trial.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmRun {
    pub label: String,
    pub duration_ns: u64,
    pub modeled_int_ops: BigUint,
    pub result_hash: String,
}

/// All measurements taken on one matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub experiment: String,
    pub config: String,
    pub runs: Vec<AlgorithmRun>,
}

impl TrialRecord {
    /// Fails unless every run produced the same determinant.
    pub fn check_agreement(&self) -> Result<()> {
        if let Some(first) = self.runs.first() {
            if let Some(bad) = self.runs.iter().find(|r| r.result_hash != first.result_hash) {
                return Err(Error::ResultMismatch(format!(
                    "{} [{}]: {} gave {}, {} gave {}",
                    self.experiment, self.config, first.label, first.result_hash, bad.label, bad.result_hash
                )));
            }
        }
        Ok(())
    }
}

const MIN_SAMPLE: Duration = Duration::from_millis(2);
const MAX_REPS: u32 = 1000;

/// Runs `f` once, then repeats it until at least [`MIN_SAMPLE`] has elapsed,
/// returning the first output and the mean duration per call.
fn time_repeated<T>(mut f: impl FnMut() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let out = f()?;
    let first = start.elapsed();
    let (total, reps) = repeat_until_sample(first, 1, || f().map(drop))?;
    Ok((out, total / reps))
}

/// Runs `first` once, keeping its output. If that call alone fills
/// [`MIN_SAMPLE`] its duration is reported; otherwise the duration is the
/// mean over repeated calls of `rest`, which must do the same work minus
/// bookkeeping the caller only needs once.
fn time_first_then<T>(
    first: impl FnOnce() -> Result<T>,
    mut rest: impl FnMut() -> Result<()>,
) -> Result<(T, Duration)> {
    let start = Instant::now();
    let out = first()?;
    let elapsed = start.elapsed();
    if elapsed >= MIN_SAMPLE {
        return Ok((out, elapsed));
    }
    let (total, reps) = repeat_until_sample(Duration::ZERO, 0, &mut rest)?;
    Ok((out, total / reps))
}

fn repeat_until_sample(
    mut total: Duration,
    mut reps: u32,
    mut f: impl FnMut() -> Result<()>,
) -> Result<(Duration, u32)> {
    while reps == 0 || (total < MIN_SAMPLE && reps < MAX_REPS) {
        let t = Instant::now();
        f()?;
        total += t.elapsed();
        reps += 1;
    }
    Ok((total, reps))
}

fn nanos(d: Duration) -> u64 {
    u64::try_from(d.as_nanos()).unwrap_or(u64::MAX)
}

fn median(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Minor,
    Bareiss,
    /// The per-trial ceiling was hit; the walk stops here.
    Timeout,
}

/// What decides the direction of each staircase step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepRule {
    /// Median wall-clock time (the experiment as designed).
    Time,
    /// Metered integer operations; makes the walk machine-independent.
    Modeled,
}

#[derive(Clone, Debug)]
pub struct StaircaseConfig {
    pub n_start: usize,
    pub s_start: usize,
    pub step_budget: usize,
    pub seed: u64,
    pub matrices_per_point: usize,
    pub ceiling: Duration,
    pub coeff_lo: i64,
    pub coeff_hi: i64,
    pub rule: StepRule,
}

impl Default for StaircaseConfig {
    fn default() -> Self {
        StaircaseConfig {
            n_start: 1,
            s_start: 1,
            step_budget: 20,
            seed: 0,
            matrices_per_point: 3,
            ceiling: Duration::from_secs(60),
            coeff_lo: -999,
            coeff_hi: 999,
            rule: StepRule::Time,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseRow {
    pub step: usize,
    pub n: usize,
    pub s: usize,
    pub winner: Winner,
    pub t_minor_ns: u64,
    pub t_bareiss_ns: u64,
    /// Metered minor-expansion cost on the first matrix at this point.
    pub modeled_cm: u128,
    /// Metered elimination cost on the first matrix at this point.
    pub modeled_cg_meter: u128,
}

impl CsvSchema for StaircaseRow {
    const HEADER: &'static [&'static str] =
        &["step", "n", "s", "winner", "t_minor_ns", "t_bareiss_ns", "modeled_cm", "modeled_cg_meter"];
}

/// Seed of the `index`-th matrix generated at grid point `(n, s)`.
fn point_seed(seed: u64, n: usize, s: usize, index: usize) -> u64 {
    seed ^ ((n as u64) << 40 | (s as u64) << 20 | index as u64)
}

fn to_u128(x: &BigUint) -> u128 {
    x.to_u128().unwrap_or(u128::MAX)
}

enum Timed {
    Done(Polynomial, CostMeter, Duration),
    TimedOut,
}

fn time_algorithm(a: &SymMatrix, bareiss: bool, ceiling: Duration) -> Result<Timed> {
    let deadline = Deadline(Instant::now().checked_add(ceiling));
    let run = |meter: Option<&mut CostMeter>| {
        if bareiss {
            det::bareiss_core(a, meter, deadline, &mut |_| {})
        } else {
            det::minor_expansion_core(a, meter, deadline, &mut |_, _| {})
        }
    };
    // Metering is bookkeeping; only the first call pays for it.
    let timed = time_first_then(
        || {
            let mut meter = CostMeter::new();
            run(Some(&mut meter)).map(|d| (d, meter))
        },
        || run(None).map(drop),
    );
    match timed {
        Ok(((d, meter), t)) => Ok(Timed::Done(d, meter, t)),
        Err(Error::TimeCeilingExceeded) => Ok(Timed::TimedOut),
        Err(e) => Err(e),
    }
}

/// Walks the `(n, s)` plane from the start point: after each point, `n` grows
/// if minor expansion won there and `s` grows otherwise.
///
/// `on_row` sees every row as soon as it is measured. The walk stops after
/// `step_budget` points or at the first point where a computation exceeds the
/// ceiling (that point is emitted with [`Winner::Timeout`]).
pub fn crossover_staircase(
    config: &StaircaseConfig,
    mut on_row: impl FnMut(&StaircaseRow),
) -> Result<Vec<StaircaseRow>> {
    if config.step_budget == 0 || config.matrices_per_point == 0 {
        return Err(Error::InvalidRange("step budget and matrices per point must be positive".into()));
    }
    if config.n_start == 0 || config.s_start == 0 {
        return Err(Error::InvalidRange("start point must have n, s >= 1".into()));
    }
    let (mut n, mut s) = (config.n_start, config.s_start);
    let mut rows = Vec::with_capacity(config.step_budget);
    for step in 0..config.step_budget {
        let mut t_minor = Vec::new();
        let mut t_bareiss = Vec::new();
        let mut modeled = None;
        let mut timed_out = false;
        for index in 0..config.matrices_per_point {
            let a = gen_one_homogeneous(n, s, config.coeff_lo, config.coeff_hi, point_seed(config.seed, n, s, index))?;
            let (Timed::Done(dm, mm, tm), Timed::Done(db, mb, tb)) =
                (time_algorithm(&a, false, config.ceiling)?, time_algorithm(&a, true, config.ceiling)?)
            else {
                timed_out = true;
                break;
            };
            let record = TrialRecord {
                experiment: "crossover".into(),
                config: format!("n={n} s={s} matrix={index}"),
                runs: vec![
                    AlgorithmRun {
                        label: "minor".into(),
                        duration_ns: nanos(tm),
                        modeled_int_ops: mm.modeled_int_ops.clone(),
                        result_hash: result_hash(&dm),
                    },
                    AlgorithmRun {
                        label: "bareiss".into(),
                        duration_ns: nanos(tb),
                        modeled_int_ops: mb.modeled_int_ops.clone(),
                        result_hash: result_hash(&db),
                    },
                ],
            };
            record.check_agreement()?;
            if dm != db {
                return Err(Error::ResultMismatch(format!("n={n} s={s} matrix={index}")));
            }
            t_minor.push(nanos(tm));
            t_bareiss.push(nanos(tb));
            modeled.get_or_insert((to_u128(&mm.modeled_int_ops), to_u128(&mb.modeled_int_ops)));
        }

        let (modeled_cm, modeled_cg_meter) = modeled.unwrap_or((0, 0));
        let (tm, tb) = if timed_out {
            (nanos(config.ceiling), nanos(config.ceiling))
        } else {
            (median(&mut t_minor), median(&mut t_bareiss))
        };
        let winner = if timed_out {
            Winner::Timeout
        } else {
            let minor_wins = match config.rule {
                StepRule::Time => tm < tb,
                StepRule::Modeled => modeled_cm < modeled_cg_meter,
            };
            if minor_wins {
                Winner::Minor
            } else {
                Winner::Bareiss
            }
        };
        let row = StaircaseRow { step, n, s, winner, t_minor_ns: tm, t_bareiss_ns: tb, modeled_cm, modeled_cg_meter };
        on_row(&row);
        rows.push(row);
        match winner {
            Winner::Minor => n += 1,
            Winner::Bareiss => s += 1,
            Winner::Timeout => break,
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct SortingStudyConfig {
    pub n: usize,
    pub s: usize,
    pub zero_probs: Vec<f64>,
    pub trials: usize,
    pub max_terms: usize,
    pub coeff_lo: i64,
    pub coeff_hi: i64,
    pub seed: u64,
    pub strategies: Vec<SortStrategy>,
    /// Worker threads for the modeled-cost computations. Timed sections always
    /// run one at a time on the calling thread.
    pub jobs: usize,
}

impl Default for SortingStudyConfig {
    fn default() -> Self {
        SortingStudyConfig {
            n: 9,
            s: 5,
            zero_probs: (1..=10).map(|k| k as f64 / 10.0).collect(),
            trials: 100,
            max_terms: 4,
            coeff_lo: -999,
            coeff_hi: 999,
            seed: 0,
            strategies: SortStrategy::all(),
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SortingRow {
    pub zero_prob: f64,
    pub strategy: String,
    pub direction: String,
    pub trials: usize,
    /// Mean over trials of sorted time / unsorted time.
    pub mean_time_ratio: f64,
    /// Mean over trials of sorted modeled cost / unsorted modeled cost.
    pub mean_cost_ratio: f64,
}

impl CsvSchema for SortingRow {
    const HEADER: &'static [&'static str] =
        &["zero_prob", "strategy", "direction", "trials", "mean_time_ratio", "mean_cost_ratio"];
}

/// Ratio of modeled costs; `0/0` is 1 and a zero denominator otherwise counts as 1.
pub fn cost_ratio(sorted: &BigUint, unsorted: &BigUint) -> f64 {
    let (a, b) = (sorted.to_f64().unwrap_or(f64::MAX), unsorted.to_f64().unwrap_or(f64::MAX));
    if a == 0.0 && b == 0.0 {
        1.0
    } else {
        a / b.max(1.0)
    }
}

/// Modeled cost of the unsorted matrix, then of each strategy's reordering.
fn modeled_costs(a: &SymMatrix, strategies: &[SortStrategy]) -> Result<(BigUint, Vec<BigUint>)> {
    let base = c_m_exact(a)?;
    let sorted = strategies.iter().map(|&st| c_m_exact(&sort_rows(a, st).0)).collect::<Result<Vec<_>>>()?;
    Ok((base, sorted))
}

/// For each zero probability and strategy, the mean ratio of sorted to
/// unsorted minor-expansion time (sort included) and of modeled cost, on the
/// same matrices.
///
/// Trial `t` at the `k`-th probability uses seed `seed ^ (k << 32 | t)`.
pub fn sorting_study(config: &SortingStudyConfig, mut on_row: impl FnMut(&SortingRow)) -> Result<Vec<SortingRow>> {
    if config.strategies.is_empty() {
        return Err(Error::InvalidRange("at least one strategy is required".into()));
    }
    if config.trials == 0 {
        return Err(Error::InvalidRange("trials must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidRange(e.to_string()))?;
    let k = config.strategies.len();
    let mut rows = Vec::with_capacity(config.zero_probs.len() * k);

    for (pi, &zero_prob) in config.zero_probs.iter().enumerate() {
        let matrices = (0..config.trials)
            .map(|t| {
                gen_sparse_linear(&ExperimentConfig {
                    n: config.n,
                    s: config.s,
                    zero_prob,
                    max_terms: config.max_terms,
                    coeff_lo: config.coeff_lo,
                    coeff_hi: config.coeff_hi,
                    seed: config.seed ^ ((pi as u64) << 32 | t as u64),
                    trials: config.trials,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let costs = pool.install(|| {
            matrices.par_iter().map(|a| modeled_costs(a, &config.strategies)).collect::<Result<Vec<_>>>()
        })?;

        let mut time_sums = vec![0.0f64; k];
        let mut cost_sums = vec![0.0f64; k];
        for (t, a) in matrices.iter().enumerate() {
            let (unsorted, t_unsorted) = time_repeated(|| Ok(det::minor_expansion(a, None)))?;
            let t_unsorted = t_unsorted.as_secs_f64().max(1e-9);
            let (base_cost, sorted_costs) = &costs[t];
            for (si, &strategy) in config.strategies.iter().enumerate() {
                let (sorted, t_sorted) = time_repeated(|| Ok(sorted_minor_expansion(a, strategy, None)))?;
                if sorted != unsorted {
                    return Err(Error::ResultMismatch(format!(
                        "sorting study p={zero_prob} trial={t} strategy={strategy}: {} vs {}",
                        result_hash(&sorted),
                        result_hash(&unsorted)
                    )));
                }
                time_sums[si] += t_sorted.as_secs_f64() / t_unsorted;
                cost_sums[si] += cost_ratio(&sorted_costs[si], base_cost);
            }
        }

        for (si, strategy) in config.strategies.iter().enumerate() {
            let row = SortingRow {
                zero_prob,
                strategy: strategy.key.name().to_string(),
                direction: strategy.direction.name().to_string(),
                trials: config.trials,
                mean_time_ratio: time_sums[si] / config.trials as f64,
                mean_cost_ratio: cost_sums[si] / config.trials as f64,
            };
            on_row(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_empty_records() {
        let mut buf = Vec::new();
        write_csv_to::<StaircaseRow, _>(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "step,n,s,winner,t_minor_ns,t_bareiss_ns,modeled_cm,modeled_cg_meter\n"
        );
    }

    #[test]
    fn staircase_rows_round_trip() {
        let rows = vec![
            StaircaseRow {
                step: 0,
                n: 1,
                s: 1,
                winner: Winner::Minor,
                t_minor_ns: 10,
                t_bareiss_ns: 20,
                modeled_cm: 1,
                modeled_cg_meter: 0,
            },
            StaircaseRow {
                step: 1,
                n: 2,
                s: 1,
                winner: Winner::Timeout,
                t_minor_ns: 5,
                t_bareiss_ns: 7,
                modeled_cm: u128::MAX,
                modeled_cg_meter: 3,
            },
        ];
        let mut buf = Vec::new();
        write_csv_to(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.ends_with('\n'));
        assert!(text.contains(",timeout,"));
        let back: Vec<StaircaseRow> = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn fields_needing_quotes_are_quoted() {
        let rows = vec![SortingRow {
            zero_prob: 0.5,
            strategy: "a,b".into(),
            direction: "say \"hi\"".into(),
            trials: 1,
            mean_time_ratio: 1.0,
            mean_cost_ratio: 0.25,
        }];
        let mut buf = Vec::new();
        write_csv_to(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"a,b\",\"say \"\"hi\"\"\""), "{text}");
        let back: Vec<SortingRow> = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn read_csv_rejects_wrong_header() {
        let text = "a,b\n1,2\n";
        assert!(read_csv::<StaircaseRow, _>(text.as_bytes()).is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        std::fs::write(&path, "stale").unwrap();
        write_csv::<SortingRow>(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "zero_prob,strategy,direction,trials,mean_time_ratio,mean_cost_ratio\n"
        );
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn median_of_values() {
        assert_eq!(median(&mut [5, 1, 3]), 3);
        assert_eq!(median(&mut [4, 1, 3, 2]), 2);
    }

    #[test]
    fn cost_ratio_conventions() {
        let z = BigUint::from(0u32);
        assert_eq!(cost_ratio(&z, &z), 1.0);
        assert_eq!(cost_ratio(&BigUint::from(3u32), &BigUint::from(4u32)), 0.75);
        assert_eq!(cost_ratio(&BigUint::from(3u32), &z), 3.0);
    }

    #[test]
    fn staircase_small_walk_is_monotone() {
        let cfg = StaircaseConfig { step_budget: 6, matrices_per_point: 1, ..Default::default() };
        let rows = crossover_staircase(&cfg, |_| {}).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!((rows[0].n, rows[0].s), (1, 1));
        for w in rows.windows(2) {
            let dn = w[1].n - w[0].n;
            let ds = w[1].s - w[0].s;
            assert_eq!(dn + ds, 1);
            assert_eq!(dn == 1, w[0].winner == Winner::Minor);
        }
    }

    #[test]
    fn staircase_stops_at_ceiling() {
        let cfg = StaircaseConfig {
            n_start: 7,
            s_start: 3,
            step_budget: 5,
            matrices_per_point: 1,
            ceiling: Duration::ZERO,
            ..Default::default()
        };
        let rows = crossover_staircase(&cfg, |_| {}).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].winner, Winner::Timeout);
    }

    #[test]
    fn sorting_study_small() {
        let cfg = SortingStudyConfig { n: 4, s: 3, zero_probs: vec![0.5, 1.0], trials: 3, ..Default::default() };
        let rows = sorting_study(&cfg, |_| {}).unwrap();
        assert_eq!(rows.len(), 16);
        for r in rows.iter().filter(|r| r.zero_prob == 1.0) {
            assert_eq!(r.mean_cost_ratio, 1.0);
        }
        assert!(sorting_study(&SortingStudyConfig { strategies: vec![], ..cfg }, |_| {}).is_err());
    }
}
