//! Command implementations. Each returns the fully rendered output plus a
//! flag for check failures, so the binary is a thin dispatch shell and the
//! tests can call straight in.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};

use schwinger_core::numtheory::MAX_MODULUS;
use schwinger_core::verify::{self, CheckStatus, SuiteConfig};
use schwinger_core::{BiFactorization, Factorization, LabeledBasis};

use crate::format::{join_tuple, render_csv, render_table, OutputFormat};
use crate::report::{
    report_doc, BasisDoc, ConstituentDoc, FactorDoc, OverlapDoc, OverlapEntryDoc, RootDoc,
    RootsDoc, StateDoc,
};

/// Rendered command result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    /// True when a verification run reported failures (process exit 1).
    pub failures: bool,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        Self { stdout, failures: false }
    }
}

/// Presentation options shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub format: OutputFormat,
    /// Print labels 0-based. The default presents label ranges the
    /// traditional way, `1..=m`, with the residue 0 shown as `m`.
    pub zero_based: bool,
}

impl RenderOptions {
    fn label(&self, value: u64, modulus: u64) -> u64 {
        if self.zero_based || value != 0 {
            value
        } else {
            modulus
        }
    }

    fn label_tuple(&self, values: &[u64], moduli: &[u64]) -> Vec<u64> {
        values.iter().zip(moduli).map(|(&v, &m)| self.label(v, m)).collect()
    }
}

/// The default budget for dense float cross-checks.
pub const DEFAULT_MAX_DENSE: u64 = 4096;

/// Environment variable overriding the dense budget (the `--max-dense`
/// flag wins over both).
pub const MAX_DENSE_ENV: &str = "SCHWINGER_MAX_DENSE";

/// Resolves the dense budget: flag, then environment, then default.
pub fn resolve_max_dense(flag: Option<u64>) -> Result<u64> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(MAX_DENSE_ENV) {
        Ok(raw) => raw
            .parse::<u64>()
            .map_err(|_| anyhow!("{MAX_DENSE_ENV} must be a non-negative integer, got {raw:?}")),
        Err(_) => Ok(DEFAULT_MAX_DENSE),
    }
}

/// Which labeled basis a command refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSpec {
    Kq,
    KqConjugate,
    SplitPosition,
    SplitMomentum,
    CompletePosition,
    CompleteMomentum,
}

impl BasisSpec {
    /// Parses the CLI spelling. `kq` and `KQ` are distinct bases, so
    /// matching is case-sensitive.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "kq" => BasisSpec::Kq,
            "KQ" => BasisSpec::KqConjugate,
            "q1q2" => BasisSpec::SplitPosition,
            "k1k2" => BasisSpec::SplitMomentum,
            "complete" => BasisSpec::CompletePosition,
            "complete-momentum" => BasisSpec::CompleteMomentum,
            other => bail!(
                "unknown basis type {other:?}; expected kq, KQ, q1q2, k1k2, complete, or complete-momentum"
            ),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BasisSpec::Kq => "kq",
            BasisSpec::KqConjugate => "KQ",
            BasisSpec::SplitPosition => "q1q2",
            BasisSpec::SplitMomentum => "k1k2",
            BasisSpec::CompletePosition => "complete",
            BasisSpec::CompleteMomentum => "complete-momentum",
        }
    }

    fn needs_split(&self) -> bool {
        !matches!(self, BasisSpec::CompletePosition | BasisSpec::CompleteMomentum)
    }
}

fn validate_dimension(m: u64) -> Result<()> {
    if m == 0 {
        bail!("M must be at least 1");
    }
    if m > MAX_MODULUS {
        bail!("M must be at most {MAX_MODULUS}");
    }
    Ok(())
}

/// Builds the split `M = a * b` from the `--split` argument, enforcing the
/// coprimality requirement.
fn build_split(m: u64, split: (u64, u64)) -> Result<BiFactorization> {
    let (a, b) = split;
    if a.checked_mul(b) != Some(m) {
        bail!("--split {a},{b} does not multiply to M = {m}");
    }
    BiFactorization::new(a, b)
        .map_err(|e| anyhow!("invalid split: {e}; the two factors must be coprime"))
}

fn build_basis(m: u64, spec: BasisSpec, split: Option<(u64, u64)>) -> Result<LabeledBasis> {
    if spec.needs_split() {
        let split = split
            .ok_or_else(|| anyhow!("basis type {} requires --split a,b", spec.name()))?;
        let split = build_split(m, split)?;
        Ok(match spec {
            BasisSpec::Kq => LabeledBasis::kq(&split),
            BasisSpec::KqConjugate => LabeledBasis::kq_conjugate(&split),
            BasisSpec::SplitPosition => LabeledBasis::split_position(&split),
            BasisSpec::SplitMomentum => LabeledBasis::split_momentum(&split),
            _ => unreachable!(),
        })
    } else {
        let factors = Factorization::new(m).context("factorizing M")?;
        Ok(match spec {
            BasisSpec::CompletePosition => LabeledBasis::complete_position(&factors),
            BasisSpec::CompleteMomentum => LabeledBasis::complete_momentum(&factors),
            _ => unreachable!(),
        })
    }
}

/// `factor M`: the prime-power constituents with cofactors and inverses.
pub fn cmd_factor(m: u64, opts: RenderOptions) -> Result<CommandOutput> {
    validate_dimension(m)?;
    let factors = Factorization::new(m)?;
    let doc = FactorDoc {
        m,
        constituents: factors
            .constituents()
            .iter()
            .map(|c| ConstituentDoc {
                prime: c.prime,
                exponent: c.exponent,
                modulus: c.modulus,
                cofactor: c.cofactor,
                inverse: c.cofactor_inverse,
            })
            .collect(),
    };
    let out = match opts.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv | OutputFormat::Table => {
            let headers = ["prime", "exponent", "modulus", "cofactor", "inverse"];
            let rows: Vec<Vec<String>> = doc
                .constituents
                .iter()
                .map(|c| {
                    vec![
                        c.prime.to_string(),
                        c.exponent.to_string(),
                        c.modulus.to_string(),
                        c.cofactor.to_string(),
                        c.inverse.to_string(),
                    ]
                })
                .collect();
            match opts.format {
                OutputFormat::Csv => render_csv(&headers, &rows),
                _ => {
                    let mut s = format!("M = {m}\n");
                    if rows.is_empty() {
                        s.push_str("no prime constituents (M = 1)\n");
                    } else {
                        s.push_str(&render_table(&headers, &rows));
                    }
                    s
                }
            }
        }
    };
    Ok(CommandOutput::ok(out))
}

fn root_docs(factors: &Factorization) -> Vec<RootDoc> {
    factors
        .unit_square_roots()
        .iter()
        .map(|root| {
            let exotic = !root.is_sign_root(factors);
            let signs = if exotic {
                "exotic".to_string()
            } else {
                root.sign_pattern()
                    .iter()
                    .zip(factors.constituents())
                    .map(|(&r, c)| if r == 1 % c.modulus { '+' } else { '-' })
                    .collect()
            };
            let split = factors
                .sign_root_split(root)
                .ok()
                .map(|s| [s.m1(), s.m2()]);
            RootDoc {
                value: root.value(),
                pattern: root.sign_pattern().to_vec(),
                signs,
                split,
                exotic,
            }
        })
        .collect()
}

/// `roots M`: the solutions of `x^2 = 1 [mod M]` with sign patterns and the
/// coprime split each sign root selects.
pub fn cmd_roots(m: u64, opts: RenderOptions) -> Result<CommandOutput> {
    validate_dimension(m)?;
    let factors = Factorization::new(m)?;
    let roots = root_docs(&factors);
    let doc = RootsDoc {
        m,
        bifactorizations: factors.bifactorization_count(),
        exotic_roots: roots.iter().filter(|r| r.exotic).count() as u64,
        roots,
    };
    let out = match opts.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv | OutputFormat::Table => {
            let headers = ["root", "signs", "split"];
            let rows: Vec<Vec<String>> = doc
                .roots
                .iter()
                .map(|r| {
                    vec![
                        r.value.to_string(),
                        r.signs.clone(),
                        r.split.map_or_else(|| "-".to_string(), |[a, b]| format!("{a}*{b}")),
                    ]
                })
                .collect();
            match opts.format {
                OutputFormat::Csv => render_csv(&headers, &rows),
                _ => {
                    let mut s = format!(
                        "M = {m}: {} roots, {} coprime bi-factorizations\n",
                        doc.roots.len(),
                        doc.bifactorizations
                    );
                    if doc.exotic_roots > 0 {
                        let _ = writeln!(
                            s,
                            "{} exotic roots (residue other than +/-1 modulo a power of two)",
                            doc.exotic_roots
                        );
                    }
                    s.push_str(&render_table(&headers, &rows));
                    s
                }
            }
        }
    };
    Ok(CommandOutput::ok(out))
}

fn basis_doc(basis: &LabeledBasis, opts: RenderOptions) -> Result<BasisDoc> {
    let states = basis
        .labels()
        .map(|label| {
            let state = basis.state(&label)?;
            Ok(StateDoc {
                label: opts.label_tuple(&label, basis.scheme()),
                support: state.support().to_vec(),
                phase_exponents: state.phases().to_vec(),
            })
        })
        .collect::<schwinger_core::Result<Vec<_>>>()?;
    Ok(BasisDoc { m: basis.dimension(), scheme: basis.scheme().to_vec(), states })
}

/// `basis M --type ... [--split a,b]`: the serialized basis.
pub fn cmd_basis(
    m: u64,
    spec: BasisSpec,
    split: Option<(u64, u64)>,
    opts: RenderOptions,
) -> Result<CommandOutput> {
    validate_dimension(m)?;
    let basis = build_basis(m, spec, split)?;
    let doc = basis_doc(&basis, opts)?;
    let out = match opts.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv | OutputFormat::Table => {
            let headers = ["label", "support", "phase_exponents"];
            let rows: Vec<Vec<String>> = doc
                .states
                .iter()
                .map(|s| {
                    vec![
                        join_tuple(&s.label),
                        join_tuple(&s.support),
                        join_tuple(&s.phase_exponents),
                    ]
                })
                .collect();
            match opts.format {
                OutputFormat::Csv => render_csv(&headers, &rows),
                _ => {
                    let mut s = format!(
                        "M = {m}, basis {}, scheme {}\n",
                        spec.name(),
                        join_tuple(&doc.scheme)
                    );
                    s.push_str(&render_table(&headers, &rows));
                    s
                }
            }
        }
    };
    Ok(CommandOutput::ok(out))
}

/// `overlap M --bra ... --ket ... [--split a,b]`: the full overlap table
/// with magnitudes and exact phase exponents.
pub fn cmd_overlap(
    m: u64,
    bra_spec: BasisSpec,
    ket_spec: BasisSpec,
    split: Option<(u64, u64)>,
    opts: RenderOptions,
) -> Result<CommandOutput> {
    validate_dimension(m)?;
    let bra = build_basis(m, bra_spec, split)?;
    let ket = build_basis(m, ket_spec, split)?;
    let mut entries = Vec::new();
    for bra_label in bra.labels() {
        let a = bra.state(&bra_label)?;
        for ket_label in ket.labels() {
            let b = ket.state(&ket_label)?;
            let ov = a.overlap(&b)?;
            entries.push(OverlapEntryDoc {
                bra_label: opts.label_tuple(&bra_label, bra.scheme()),
                ket_label: opts.label_tuple(&ket_label, ket.scheme()),
                magnitude: ov.magnitude(),
                phase: ov.single_phase().map(|p| p.to_string()),
                zero: ov.is_zero(),
            });
        }
    }
    let doc = OverlapDoc {
        m,
        bra: bra_spec.name().to_string(),
        ket: ket_spec.name().to_string(),
        entries,
    };
    let out = match opts.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv | OutputFormat::Table => {
            let headers = ["bra", "ket", "magnitude", "phase"];
            let rows: Vec<Vec<String>> = doc
                .entries
                .iter()
                .map(|e| {
                    vec![
                        join_tuple(&e.bra_label),
                        join_tuple(&e.ket_label),
                        format!("{:.10}", e.magnitude),
                        e.phase.clone().unwrap_or_else(|| "-".to_string()),
                    ]
                })
                .collect();
            match opts.format {
                OutputFormat::Csv => render_csv(&headers, &rows),
                _ => {
                    let mut s = format!(
                        "M = {m}, <{}|{}>, phases are exponents e/M of a full turn\n",
                        doc.bra, doc.ket
                    );
                    s.push_str(&render_table(&headers, &rows));
                    s
                }
            }
        }
    };
    Ok(CommandOutput::ok(out))
}

/// `check M [--checks id,..]`: runs the verification suite and renders the
/// deterministic report. `failures` is set when any check fails.
pub fn cmd_check(
    m: u64,
    selection: &[String],
    max_dense: u64,
    opts: RenderOptions,
) -> Result<CommandOutput> {
    validate_dimension(m)?;
    let known = verify::all_check_ids();
    for id in selection {
        if !known.contains(&id.as_str()) {
            bail!("unknown check id {id:?}; valid ids: {}", known.join(", "));
        }
    }
    let selection: Vec<&str> = selection.iter().map(String::as_str).collect();
    let cfg = SuiteConfig { max_dense };
    let results = verify::run_suite(m, &selection, &cfg)?;
    let doc = report_doc(m, &results);
    let failures = doc.summary.fail > 0;
    let out = match opts.format {
        OutputFormat::Json => to_json(&doc)?,
        OutputFormat::Csv | OutputFormat::Table => {
            let headers = ["check", "status", "detail"];
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    let (status, detail) = match &r.status {
                        CheckStatus::Pass => {
                            let detail = r
                                .parameters
                                .iter()
                                .map(|(k, v)| format!("{k}={v}"))
                                .collect::<Vec<_>>()
                                .join(" ");
                            ("pass", detail)
                        }
                        CheckStatus::Fail { witness } => ("fail", witness.clone()),
                        CheckStatus::Skipped { reason } => ("skipped", reason.clone()),
                    };
                    vec![r.id.to_string(), status.to_string(), detail]
                })
                .collect();
            match opts.format {
                OutputFormat::Csv => render_csv(&headers, &rows),
                _ => {
                    let mut s = render_table(&headers, &rows);
                    let _ = writeln!(
                        s,
                        "summary: pass={} fail={} skipped={}",
                        doc.summary.pass, doc.summary.fail, doc.summary.skipped
                    );
                    s
                }
            }
        }
    };
    Ok(CommandOutput { stdout: out, failures })
}

fn to_json<T: serde::Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_opts() -> RenderOptions {
        RenderOptions { format: OutputFormat::Table, zero_based: false }
    }

    #[test]
    fn factor_table_reproduces_constituent_rows() {
        let out = cmd_factor(105, table_opts()).unwrap().stdout;
        let rows: Vec<Vec<&str>> = out
            .lines()
            .skip(2)
            .map(|l| l.split_whitespace().collect())
            .collect();
        assert_eq!(
            rows,
            vec![
                vec!["3", "1", "3", "35", "2"],
                vec!["5", "1", "5", "21", "1"],
                vec!["7", "1", "7", "15", "1"],
            ]
        );
    }

    #[test]
    fn factor_one_is_empty_with_note() {
        let out = cmd_factor(1, table_opts()).unwrap().stdout;
        assert!(out.contains("no prime constituents"));
        assert!(cmd_factor(0, table_opts()).is_err());
    }

    #[test]
    fn roots_table_for_105() {
        let out = cmd_roots(105, table_opts()).unwrap().stdout;
        assert!(out.contains("8 roots, 4 coprime bi-factorizations"), "{out}");
        assert!(out.contains("76"), "{out}");
        assert!(out.contains("15*7"), "{out}");
    }

    #[test]
    fn basis_requires_split_where_needed() {
        let err = cmd_basis(6, BasisSpec::Kq, None, table_opts()).unwrap_err();
        assert!(err.to_string().contains("--split"));
        let err = cmd_basis(6, BasisSpec::Kq, Some((2, 4)), table_opts()).unwrap_err();
        assert!(err.to_string().contains("does not multiply"));
        let err = cmd_basis(12, BasisSpec::Kq, Some((2, 6)), table_opts()).unwrap_err();
        assert!(err.to_string().contains("coprime"), "{err}");
    }

    #[test]
    fn labels_are_one_based_by_default() {
        let out = cmd_basis(6, BasisSpec::Kq, Some((2, 3)), table_opts()).unwrap().stdout;
        // The k = 0, q = 0 state prints as label 2;3 in one-based mode.
        assert!(out.contains("2;3"), "{out}");
        let zero = RenderOptions { format: OutputFormat::Table, zero_based: true };
        let out = cmd_basis(6, BasisSpec::Kq, Some((2, 3)), zero).unwrap().stdout;
        assert!(out.contains("0;0"), "{out}");
    }

    #[test]
    fn unknown_check_ids_are_rejected() {
        let err = cmd_check(6, &["no-such-check".to_string()], 4096, table_opts()).unwrap_err();
        assert!(err.to_string().contains("unknown check id"));
    }

    #[test]
    fn overlap_kq_conjugate_all_magnitudes_uniform() {
        let out = cmd_overlap(
            6,
            BasisSpec::Kq,
            BasisSpec::KqConjugate,
            Some((2, 3)),
            RenderOptions { format: OutputFormat::Csv, zero_based: true },
        )
        .unwrap()
        .stdout;
        let uniform = format!("{:.10}", 1.0 / 6.0_f64.sqrt());
        for line in out.lines().skip(1) {
            assert!(line.contains(&uniform), "{line}");
        }
        assert_eq!(out.lines().count(), 37); // header + 36 entries
    }
}
