//! Observed binary RAC statistics and the dimension-witness verdict.
//!
//! A [`StatisticsTable`] holds `p(G=0 | a, y, k)` and `p(G=1 | a, y, k)` for
//! every input triple under a uniform prior. Its average payoff is compared
//! against the classical bound for the claimed dimension.

use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bounds::{binary_classical_n2, binary_quantum_n2, binary_rac_classical_value};
use crate::combinatorics::{composition_count, TaskParams, DEFAULT_COMPOSITION_CAP};
use crate::error::{Error, Result};
use crate::exact::{
    self, format_sig, serialize_opt_sig, serialize_sig, ExactRational, RationalValue,
};
use crate::payoff::PayoffConfig;
use crate::quantum::ProtocolStatistics;
use crate::strategy::{BinaryDecodingTable, DitString, EncodingStrategy, Guess};

/// Allowed deviation of `p0 + p1` from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;
/// The observed payoff must beat the classical bound by more than this.
pub const CERTIFICATION_SLACK: f64 = 1e-9;
/// Largest table accepted, in `(a, y, k)` triples.
pub const MAX_TRIPLES: u64 = 10_000_000;

const CERTIFIED_STATEMENT: &str =
    "certifies the communicated quantum system to be of at least dimension";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatisticsFormat {
    Json,
    Csv,
}

impl StatisticsFormat {
    /// From the file extension; anything but `.csv` is read as JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => StatisticsFormat::Csv,
            _ => StatisticsFormat::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatisticsTable {
    params: TaskParams,
    cfg: PayoffConfig,
    /// `(p0, p1)` at `(word n + y) d + k`.
    entries: Vec<(f64, f64)>,
}

fn triple_count(params: TaskParams) -> Result<usize> {
    let total = params.word_count_big() * BigUint::from(params.n() * params.d());
    match u64::try_from(total.clone()) {
        Ok(t) if t <= MAX_TRIPLES => Ok(t as usize),
        _ => Err(Error::CapExceeded {
            what: "statistics triples n d^(n+1)",
            count: total.to_string(),
            cap: MAX_TRIPLES,
        }),
    }
}

fn describe(a: &[usize], y: usize, k: usize) -> String {
    format!("(a={a:?}, y={y}, k={k})")
}

/// One parsed row before validation.
#[derive(Debug, Clone)]
struct RawEntry {
    a: Vec<usize>,
    y: usize,
    k: usize,
    pair: (f64, f64),
    counts: bool,
}

impl StatisticsTable {
    /// Table from probabilities indexed `(word n + y) d + k`.
    pub fn from_entries(
        params: TaskParams,
        cfg: PayoffConfig,
        entries: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if cfg.d() != params.d() {
            return Err(Error::DimensionMismatch(format!(
                "payoff config has d = {}, table has d = {}",
                cfg.d(),
                params.d()
            )));
        }
        let expected = triple_count(params)?;
        if entries.len() != expected {
            return Err(Error::Schema(format!(
                "expected {expected} entries, got {}",
                entries.len()
            )));
        }
        let table = StatisticsTable {
            params,
            cfg,
            entries,
        };
        for (idx, &(p0, p1)) in table.entries.iter().enumerate() {
            let (a, y, k) = table.triple(idx);
            check_probability_pair(p0, p1, &a, y, k)?;
        }
        Ok(table)
    }

    fn triple(&self, idx: usize) -> (Vec<usize>, usize, usize) {
        let (d, n) = (self.params.d(), self.params.n());
        let k = idx % d;
        let y = (idx / d) % n;
        let w = idx / (d * n);
        (
            DitString::from_index(w, self.params).letters().to_vec(),
            y,
            k,
        )
    }

    fn build(params: TaskParams, cfg: PayoffConfig, rows: Vec<RawEntry>) -> Result<Self> {
        let (d, n) = (params.d(), params.n());
        let total = triple_count(params)?;
        let mut slots: Vec<Option<(f64, f64)>> = vec![None; total];
        for row in rows {
            if row.a.len() != n {
                return Err(Error::Schema(format!(
                    "entry {} has {} letters, expected n = {n}",
                    describe(&row.a, row.y, row.k),
                    row.a.len()
                )));
            }
            if row.y >= n || row.k >= d || row.a.iter().any(|&l| l >= d) {
                return Err(Error::Schema(format!(
                    "entry {} out of range for d = {d}, n = {n}",
                    describe(&row.a, row.y, row.k)
                )));
            }
            let (c0, c1) = row.pair;
            let pair = if row.counts {
                if !(c0 >= 0.0 && c1 >= 0.0) || !c0.is_finite() || !c1.is_finite() {
                    return Err(Error::Normalization(format!(
                        "negative or invalid counts at {}",
                        describe(&row.a, row.y, row.k)
                    )));
                }
                let s = c0 + c1;
                if s == 0.0 {
                    return Err(Error::Normalization(format!(
                        "all-zero counts at {}",
                        describe(&row.a, row.y, row.k)
                    )));
                }
                (c0 / s, c1 / s)
            } else {
                check_probability_pair(c0, c1, &row.a, row.y, row.k)?;
                (c0, c1)
            };
            let w = DitString::new(row.a.clone(), d)?.index();
            let slot = &mut slots[(w * n + row.y) * d + row.k];
            if slot.is_some() {
                return Err(Error::Schema(format!(
                    "duplicate entry {}",
                    describe(&row.a, row.y, row.k)
                )));
            }
            *slot = Some(pair);
        }
        let mut entries = Vec::with_capacity(total);
        for (idx, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(p) => entries.push(p),
                None => {
                    let k = idx % d;
                    let y = (idx / d) % n;
                    let a = DitString::from_index(idx / (d * n), params);
                    return Err(Error::Schema(format!(
                        "missing entry {}",
                        describe(a.letters(), y, k)
                    )));
                }
            }
        }
        Ok(StatisticsTable {
            params,
            cfg,
            entries,
        })
    }

    /// Deterministic statistics of a classical strategy: `p0 ∈ {0, 1}`.
    pub fn from_binary_strategy(
        encoding: &EncodingStrategy,
        decoding: &BinaryDecodingTable,
        cfg: &PayoffConfig,
    ) -> Result<Self> {
        let params = encoding.params();
        if decoding.params() != params {
            return Err(Error::DimensionMismatch(
                "encoding and decoding parameters differ".into(),
            ));
        }
        let (d, n) = (params.d(), params.n());
        let mut entries = Vec::with_capacity(triple_count(params)?);
        for &m in encoding.table() {
            for y in 0..n {
                for k in 0..d {
                    entries.push(match decoding.get(m, y, k) {
                        Guess::Yes => (1.0, 0.0),
                        Guess::No => (0.0, 1.0),
                    });
                }
            }
        }
        StatisticsTable::from_entries(params, cfg.clone(), entries)
    }

    /// Statistics of the simulated `n = 2` quantum protocol.
    pub fn from_protocol(stats: &ProtocolStatistics, cfg: &PayoffConfig) -> Result<Self> {
        let d = stats.d;
        let params = TaskParams::new(d, 2)?;
        let mut entries = Vec::with_capacity(2 * d * d * d);
        for a0 in 0..d {
            for a1 in 0..d {
                for y in 0..2 {
                    for k in 0..d {
                        let p0 = stats.get(a0, a1, y, k);
                        entries.push((p0, 1.0 - p0));
                    }
                }
            }
        }
        StatisticsTable::from_entries(params, cfg.clone(), entries)
    }

    pub fn params(&self) -> TaskParams {
        self.params
    }

    pub fn d(&self) -> usize {
        self.params.d()
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn config(&self) -> &PayoffConfig {
        &self.cfg
    }

    /// `(p(G=0), p(G=1))` for input `a`, question `(y, k)`.
    pub fn get(&self, a: &DitString, y: usize, k: usize) -> (f64, f64) {
        self.entries[(a.index() * self.n() + y) * self.d() + k]
    }

    /// Mutable `p(G=0)` at a triple; `p(G=1)` follows as `1 − p0`.
    pub fn set_p0(&mut self, a: &DitString, y: usize, k: usize, p0: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::Normalization(format!("p0 = {p0} outside [0, 1]")));
        }
        let idx = (a.index() * self.n() + y) * self.d() + k;
        self.entries[idx] = (p0, 1.0 - p0);
        Ok(())
    }

    pub fn load(path: &Path, format: StatisticsFormat, t_yes: Option<&str>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match format {
            StatisticsFormat::Json => StatisticsTable::from_json_str(&text, t_yes),
            StatisticsFormat::Csv => {
                let t = t_yes.ok_or_else(|| {
                    Error::Schema("CSV statistics carry no t_yes; supply it separately".into())
                })?;
                StatisticsTable::from_csv_str(&text, t)
            }
        }
    }

    /// Parses the JSON layout. `t_yes_override`, when given, replaces the
    /// file's `t_yes`.
    pub fn from_json_str(text: &str, t_yes_override: Option<&str>) -> Result<Self> {
        let doc: JsonTable = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("statistics JSON: {e}")))?;
        if let Some(prior) = &doc.prior {
            if prior != "uniform" {
                return Err(Error::Schema(format!(
                    "only the uniform input prior is supported, got {prior:?}"
                )));
            }
        }
        let params = TaskParams::new(doc.d, doc.n)?;
        let t_yes = match t_yes_override {
            Some(t) => exact::parse_exact(t)?,
            None => json_number(&doc.t_yes)?,
        };
        let cfg = PayoffConfig::new(doc.d, t_yes)?;
        let rows = doc
            .entries
            .into_iter()
            .map(|e| {
                let desc = describe(&e.a, e.y, e.k);
                let (pair, counts) = match (e.p0, e.p1, e.c0, e.c1) {
                    (Some(p0), Some(p1), None, None) => ((p0, p1), false),
                    (None, None, Some(c0), Some(c1)) => ((c0, c1), true),
                    _ => {
                        return Err(Error::Schema(format!(
                            "entry {desc} needs either p0/p1 or c0/c1"
                        )))
                    }
                };
                Ok(RawEntry {
                    a: e.a,
                    y: e.y,
                    k: e.k,
                    pair,
                    counts,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        StatisticsTable::build(params, cfg, rows)
    }

    /// Parses the CSV layout `a0,…,a_{n−1},y,k,p0,p1` (or `c0,c1`). `n` is
    /// the number of `a` columns and `d` is one more than the largest label.
    pub fn from_csv_str(text: &str, t_yes: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse(format!("statistics CSV header: {e}")))?
            .clone();
        let column = |name: &str| headers.iter().position(|h| h == name);
        let mut a_cols = Vec::new();
        while let Some(c) = column(&format!("a{}", a_cols.len())) {
            a_cols.push(c);
        }
        if a_cols.is_empty() {
            return Err(Error::Schema("CSV needs columns a0, …".into()));
        }
        let y_col = column("y").ok_or_else(|| Error::Schema("CSV needs a y column".into()))?;
        let k_col = column("k").ok_or_else(|| Error::Schema("CSV needs a k column".into()))?;
        let (c0, c1, counts) = match (column("p0"), column("p1"), column("c0"), column("c1")) {
            (Some(a), Some(b), None, None) => (a, b, false),
            (None, None, Some(a), Some(b)) => (a, b, true),
            _ => {
                return Err(Error::Schema(
                    "CSV needs either p0,p1 or c0,c1 columns".into(),
                ))
            }
        };

        let int = |rec: &csv::StringRecord, col: usize, line: u64| -> Result<usize> {
            rec.get(col)
                .unwrap_or("")
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: bad integer {:?}", rec.get(col))))
        };
        let real = |rec: &csv::StringRecord, col: usize, line: u64| -> Result<f64> {
            rec.get(col)
                .unwrap_or("")
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: bad number {:?}", rec.get(col))))
        };

        let mut rows = Vec::new();
        let mut max_label = 0;
        for (i, rec) in reader.records().enumerate() {
            let line = i as u64 + 2;
            let rec = rec.map_err(|e| Error::Parse(format!("statistics CSV: {e}")))?;
            let a = a_cols
                .iter()
                .map(|&c| int(&rec, c, line))
                .collect::<Result<Vec<_>>>()?;
            let (y, k) = (int(&rec, y_col, line)?, int(&rec, k_col, line)?);
            let pair = (real(&rec, c0, line)?, real(&rec, c1, line)?);
            max_label = a.iter().copied().chain([k]).fold(max_label, usize::max);
            rows.push(RawEntry {
                a,
                y,
                k,
                pair,
                counts,
            });
        }
        if rows.is_empty() {
            return Err(Error::Schema("CSV has no entries".into()));
        }
        let d = (max_label + 1).max(2);
        let params = TaskParams::new(d, a_cols.len())?;
        let cfg = PayoffConfig::from_decimal(d, t_yes)?;
        StatisticsTable::build(params, cfg, rows)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let entries = (0..self.entries.len())
            .map(|idx| {
                let (a, y, k) = self.triple(idx);
                let (p0, p1) = self.entries[idx];
                JsonEntryOut { a, y, k, p0, p1 }
            })
            .collect();
        let doc = JsonTableOut {
            d: self.d(),
            n: self.n(),
            t_yes: self.cfg.t_yes_f64(),
            prior: "uniform",
            entries,
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for j in 0..self.n() {
            out.push_str(&format!("a{j},"));
        }
        out.push_str("y,k,p0,p1\n");
        for (idx, &(p0, p1)) in self.entries.iter().enumerate() {
            let (a, y, k) = self.triple(idx);
            for l in a {
                out.push_str(&format!("{l},"));
            }
            out.push_str(&format!("{y},{k},{},{}\n", format_sig(p0), format_sig(p1)));
        }
        out
    }

    pub fn write(&self, path: &Path, format: StatisticsFormat) -> Result<()> {
        let text = match format {
            StatisticsFormat::Json => self.to_json_string()?,
            StatisticsFormat::Csv => self.to_csv_string(),
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}

fn check_probability_pair(p0: f64, p1: f64, a: &[usize], y: usize, k: usize) -> Result<()> {
    if !(p0 >= 0.0
        && p1 >= 0.0
        && p0 <= 1.0 + NORMALIZATION_TOLERANCE
        && p1 <= 1.0 + NORMALIZATION_TOLERANCE)
    {
        return Err(Error::Normalization(format!(
            "probabilities ({p0}, {p1}) outside [0, 1] at {}",
            describe(a, y, k)
        )));
    }
    if (p0 + p1 - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Normalization(format!(
            "p0 + p1 = {} at {}",
            p0 + p1,
            describe(a, y, k)
        )));
    }
    Ok(())
}

fn json_number(v: &serde_json::Value) -> Result<ExactRational> {
    match v {
        serde_json::Value::Number(num) => exact::parse_exact(&num.to_string()),
        serde_json::Value::String(s) => exact::parse_exact(s),
        other => Err(Error::Schema(format!(
            "t_yes must be a number, got {other}"
        ))),
    }
}

#[derive(Deserialize)]
struct JsonTable {
    d: usize,
    n: usize,
    t_yes: serde_json::Value,
    #[serde(default)]
    prior: Option<String>,
    entries: Vec<JsonEntry>,
}

#[derive(Deserialize)]
struct JsonEntry {
    a: Vec<usize>,
    y: usize,
    k: usize,
    p0: Option<f64>,
    p1: Option<f64>,
    c0: Option<f64>,
    c1: Option<f64>,
}

#[derive(Serialize)]
struct JsonTableOut {
    d: usize,
    n: usize,
    #[serde(serialize_with = "serialize_sig")]
    t_yes: f64,
    prior: &'static str,
    entries: Vec<JsonEntryOut>,
}

#[derive(Serialize)]
struct JsonEntryOut {
    a: Vec<usize>,
    y: usize,
    k: usize,
    #[serde(serialize_with = "serialize_sig")]
    p0: f64,
    #[serde(serialize_with = "serialize_sig")]
    p1: f64,
}

/// `(1/(n d^n t_d)) Σ_{a,y,k} (t_yes p0 [a_y = k] + p1 [a_y ≠ k])`, summed in
/// table order.
pub fn payoff_from_statistics(table: &StatisticsTable) -> f64 {
    let (d, n) = (table.d(), table.n());
    let t_yes = table.cfg.t_yes_f64();
    let mut sum = 0.0;
    for (idx, &(p0, p1)) in table.entries.iter().enumerate() {
        let k = idx % d;
        let y = (idx / d) % n;
        let w = idx / (d * n);
        // Letter y of word w, most significant first.
        let a_y = (w / d.pow((n - 1 - y) as u32)) % d;
        sum += if a_y == k { t_yes * p0 } else { p1 };
    }
    let words = table.entries.len() / (d * n);
    sum / ((n * words) as f64 * table.cfg.t_d_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    #[serde(serialize_with = "serialize_sig")]
    pub observed: f64,
    pub classical_bound: RationalValue,
    #[serde(serialize_with = "serialize_opt_sig")]
    pub quantum_reference: Option<f64>,
    #[serde(serialize_with = "serialize_sig")]
    pub margin: f64,
    pub verdict: Verdict,
    pub d_claim: usize,
    pub n: usize,
    pub t_yes: RationalValue,
    pub statement: String,
}

/// Classical binary RAC bound at dimension `d_claim`: enumerated when the
/// composition count allows, otherwise the `n = 2` closed form.
pub fn classical_bound(n: usize, d_claim: usize, t_yes: &ExactRational) -> Result<ExactRational> {
    let params = TaskParams::new(d_claim, n)?;
    let cfg = PayoffConfig::new(d_claim, t_yes.clone())?;
    if composition_count(params) <= BigUint::from(DEFAULT_COMPOSITION_CAP) {
        binary_rac_classical_value(params, &cfg, DEFAULT_COMPOSITION_CAP)
    } else if n == 2 {
        Ok(binary_classical_n2(&cfg))
    } else {
        Err(Error::BoundUnavailable(format!(
            "d = {d_claim}, n = {n} exceeds the composition cap and has no closed form"
        )))
    }
}

/// Certified iff the observed payoff exceeds the classical bound at
/// `d_claim` by more than [`CERTIFICATION_SLACK`].
pub fn certify_dimension(table: &StatisticsTable, d_claim: usize) -> Result<CertificationReport> {
    if d_claim < 2 || d_claim > table.d() {
        return Err(Error::InvalidParams(format!(
            "claimed dimension {d_claim} must lie in 2..={}",
            table.d()
        )));
    }
    let n = table.n();
    let t_yes = table.cfg.t_yes();
    let bound = classical_bound(n, d_claim, t_yes)?;
    let bound_f64 = exact::to_f64(&bound);
    let observed = payoff_from_statistics(table);
    let margin = observed - bound_f64;
    let verdict = if margin > CERTIFICATION_SLACK {
        Verdict::Certified
    } else {
        Verdict::NotCertified
    };
    let quantum_reference = if n == 2 {
        Some(binary_quantum_n2(&PayoffConfig::new(
            d_claim,
            t_yes.clone(),
        )?))
    } else {
        None
    };
    let statement = match verdict {
        Verdict::Certified => format!("{CERTIFIED_STATEMENT} {d_claim}"),
        Verdict::NotCertified => {
            format!("observed payoff does not exceed the classical bound for dimension {d_claim}")
        }
    };
    Ok(CertificationReport {
        observed,
        classical_bound: RationalValue::from(&bound),
        quantum_reference,
        margin,
        verdict,
        d_claim,
        n,
        t_yes: RationalValue::from(t_yes),
        statement,
    })
}

impl CertificationReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{protocol_statistics, simulate_binary_payoff, StateConvention};
    use crate::strategy::best_response_binary_decoding;

    fn cfg(d: usize, t: &str) -> PayoffConfig {
        PayoffConfig::from_decimal(d, t).unwrap()
    }

    fn majority_table(d: usize, t: &str) -> StatisticsTable {
        let c = cfg(d, t);
        let params = TaskParams::new(d, 2).unwrap();
        let e = EncodingStrategy::majority(params).unwrap();
        let dec = best_response_binary_decoding(&e, &c).unwrap();
        StatisticsTable::from_binary_strategy(&e, &dec, &c).unwrap()
    }

    fn quantum_table(d: usize, t: &str) -> StatisticsTable {
        let stats = protocol_statistics(d, StateConvention::PhaseAligned).unwrap();
        StatisticsTable::from_protocol(&stats, &cfg(d, t)).unwrap()
    }

    #[test]
    fn payoff_examples() {
        assert!((payoff_from_statistics(&majority_table(3, "2")) - 0.75).abs() < 1e-12);
        let q = payoff_from_statistics(&quantum_table(3, "2"));
        assert!((q - 0.84151).abs() < 1e-5);

        let params = TaskParams::new(2, 2).unwrap();
        let c = cfg(2, "1");
        let e = EncodingStrategy::constant(params, 0).unwrap();
        let no = BinaryDecodingTable::constant(params, Guess::No);
        let t = StatisticsTable::from_binary_strategy(&e, &no, &c).unwrap();
        assert!((payoff_from_statistics(&t) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn certification_examples() {
        let r = certify_dimension(&quantum_table(3, "2"), 3).unwrap();
        assert!(r.is_certified());
        assert_eq!(r.classical_bound.fraction, "3/4");
        assert!(r.statement.contains("at least dimension 3"));

        let r = certify_dimension(&majority_table(3, "2"), 3).unwrap();
        assert!(!r.is_certified());

        let params = TaskParams::new(3, 2).unwrap();
        let c = cfg(3, "2");
        let e = EncodingStrategy::constant(params, 0).unwrap();
        let no = BinaryDecodingTable::constant(params, Guess::No);
        let t = StatisticsTable::from_binary_strategy(&e, &no, &c).unwrap();
        for claim in 2..=3 {
            assert!(!certify_dimension(&t, claim).unwrap().is_certified());
        }
        assert!(certify_dimension(&t, 4).is_err());
        assert!(certify_dimension(&t, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = quantum_table(4, "2.5");
        let back = StatisticsTable::from_json_str(&t.to_json_string().unwrap(), None).unwrap();
        let sim = simulate_binary_payoff(4, &cfg(4, "2.5")).unwrap();
        assert!((payoff_from_statistics(&back) - sim).abs() < 1e-9);
        assert_eq!(
            certify_dimension(&t, 4).unwrap().verdict,
            certify_dimension(&back, 4).unwrap().verdict
        );
    }

    #[test]
    fn csv_round_trip() {
        let t = quantum_table(3, "2");
        let back = StatisticsTable::from_csv_str(&t.to_csv_string(), "2").unwrap();
        assert_eq!(back.d(), 3);
        assert_eq!(back.n(), 2);
        assert!((payoff_from_statistics(&back) - payoff_from_statistics(&t)).abs() < 1e-9);
    }

    #[test]
    fn missing_triple_is_named() {
        let t = majority_table(2, "1");
        let csv = t.to_csv_string();
        let trimmed: String = csv
            .lines()
            .filter(|l| *l != "1,0,1,1,0,1" && *l != "1,0,1,1,1,0")
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(trimmed.lines().count() + 1, csv.lines().count());
        match StatisticsTable::from_csv_str(&trimmed, "1") {
            Err(Error::Schema(msg)) => assert!(msg.contains("(a=[1, 0], y=1, k=1)"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_triple_rejected() {
        let csv = "a0,y,k,p0,p1\n0,0,0,1,0\n0,0,0,1,0\n0,0,1,0,1\n1,0,0,0,1\n1,0,1,1,0\n";
        assert!(matches!(
            StatisticsTable::from_csv_str(csv, "1"),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn counts_are_normalized() {
        let csv = "a0,y,k,c0,c1\n0,0,0,3,1\n0,0,1,0,4\n1,0,0,1,1\n1,0,1,5,0\n";
        let t = StatisticsTable::from_csv_str(csv, "1").unwrap();
        let a = DitString::new(vec![0], 2).unwrap();
        assert_eq!(t.get(&a, 0, 0), (0.75, 0.25));
        let zero = "a0,y,k,c0,c1\n0,0,0,0,0\n0,0,1,0,4\n1,0,0,1,1\n1,0,1,5,0\n";
        assert!(matches!(
            StatisticsTable::from_csv_str(zero, "1"),
            Err(Error::Normalization(_))
        ));
        let neg = "a0,y,k,c0,c1\n0,0,0,-1,2\n0,0,1,0,4\n1,0,0,1,1\n1,0,1,5,0\n";
        assert!(matches!(
            StatisticsTable::from_csv_str(neg, "1"),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn bad_pairs_and_priors_rejected() {
        let off = "a0,y,k,p0,p1\n0,0,0,0.5,0.6\n0,0,1,0,1\n1,0,0,0,1\n1,0,1,1,0\n";
        assert!(matches!(
            StatisticsTable::from_csv_str(off, "1"),
            Err(Error::Normalization(_))
        ));
        let json = r#"{"d":2,"n":1,"t_yes":1,"prior":"skewed","entries":[]}"#;
        assert!(matches!(
            StatisticsTable::from_json_str(json, None),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            StatisticsTable::from_json_str("{", None),
            Err(Error::Parse(_))
        ));
        let mixed = r#"{"d":2,"n":1,"t_yes":1,"entries":[{"a":[0],"y":0,"k":0,"p0":1,"c1":0}]}"#;
        assert!(matches!(
            StatisticsTable::from_json_str(mixed, None),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn json_t_yes_is_exact() {
        let json = r#"{"d":2,"n":1,"t_yes":1.9994,"entries":[
            {"a":[0],"y":0,"k":0,"p0":1,"p1":0},{"a":[0],"y":0,"k":1,"p0":0,"p1":1},
            {"a":[1],"y":0,"k":0,"p0":0,"p1":1},{"a":[1],"y":0,"k":1,"p0":1,"p1":0}]}"#;
        let t = StatisticsTable::from_json_str(json, None).unwrap();
        assert_eq!(t.config().t_yes(), &exact::parse_exact("1.9994").unwrap());
        // A single dit is sent perfectly, so nothing beats the classical bound.
        let r = certify_dimension(&t, 2).unwrap();
        assert!((r.observed - 1.0).abs() < 1e-12);
        assert_eq!(r.classical_bound.fraction, "1");
        assert!(!r.is_certified());
    }

    #[test]
    fn certification_is_monotone() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let base = majority_table(3, "2");
        let params = base.params();
        for _ in 0..200 {
            let mut t = base.clone();
            let w = rng.gen_range(0..9);
            let a = DitString::from_index(w, params);
            let y = rng.gen_range(0..2);
            let k = a.letters()[y];
            let before = certify_dimension(&t, 3).unwrap();
            let p0 = t.get(&a, y, k).0;
            t.set_p0(&a, y, k, p0 + (1.0 - p0) * rng.gen::<f64>())
                .unwrap();
            let after = certify_dimension(&t, 3).unwrap();
            assert!(after.observed >= before.observed);
            assert!(!(before.is_certified() && !after.is_certified()));
        }
    }

    #[test]
    fn bound_unavailable_for_large_general_n() {
        assert!(classical_bound(2, 5000, &exact::parse_exact("2").unwrap()).is_ok());
        let err = classical_bound(8, 60, &exact::parse_exact("2").unwrap()).unwrap_err();
        assert!(matches!(err, Error::BoundUnavailable(_)));
    }
}
