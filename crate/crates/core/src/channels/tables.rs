//! Bundled machine-readable fixtures of the published coefficient tables,
//! with strict count validation. Values are parsed exactly as printed.

use super::circuit::{random_circuit_spec_from_params, CircuitSpec, PARAM_COUNT_RANDOM_SPEC};
use super::generators::RandomHermitianCoeffs;
use super::ChannelError;
use crate::basis::base4_digit;

const TABLE1: &str = include_str!("../../fixtures/table1.txt");
const TABLE2: &str = include_str!("../../fixtures/table2.txt");
const TABLE3: &str = include_str!("../../fixtures/table3.txt");
const TABLE4: &str = include_str!("../../fixtures/table4.txt");
const TABLE5: &str = include_str!("../../fixtures/table5.txt");
const TABLE6: &str = include_str!("../../fixtures/table6.txt");
const TABLE7: &str = include_str!("../../fixtures/table7.txt");
const SCHEDULE: &str = include_str!("../../fixtures/schedule.txt");

/// The bundled Hermitian-coefficient tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientTable {
    /// Three-qubit target for the k-fidelity hierarchy scatter.
    Table1,
    /// Two-qubit target for the 0-fidelity scatter.
    Table2,
    /// Three-qubit target for the 0-fidelity scatter.
    Table3,
    /// Three-qubit target of the full-trace benchmark pair.
    Table4,
    /// Three-qubit rotation generator of the full-trace benchmark pair.
    Table5,
}

impl CoefficientTable {
    pub fn n_qubits(self) -> usize {
        match self {
            CoefficientTable::Table2 => 2,
            _ => 3,
        }
    }

    fn raw(self) -> &'static str {
        match self {
            CoefficientTable::Table1 => TABLE1,
            CoefficientTable::Table2 => TABLE2,
            CoefficientTable::Table3 => TABLE3,
            CoefficientTable::Table4 => TABLE4,
            CoefficientTable::Table5 => TABLE5,
        }
    }
}

fn data_lines(raw: &str) -> impl Iterator<Item = &str> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Parse a Hermitian coefficient fixture: one `digits value` line per
/// coefficient.
pub fn parse_coefficients(
    raw: &str,
    n_qubits: usize,
) -> Result<RandomHermitianCoeffs, ChannelError> {
    let expected = 1usize << (2 * n_qubits);
    let mut alpha = vec![f64::NAN; expected];
    let mut seen = 0usize;
    for line in data_lines(raw) {
        let mut parts = line.split_whitespace();
        let key = parts
            .next()
            .ok_or_else(|| ChannelError::Fixture(format!("malformed line: {line:?}")))?;
        let value: f64 = parts
            .next()
            .ok_or_else(|| ChannelError::Fixture(format!("missing value: {line:?}")))?
            .parse()
            .map_err(|e| ChannelError::Fixture(format!("bad value in {line:?}: {e}")))?;
        if parts.next().is_some() {
            return Err(ChannelError::Fixture(format!("trailing tokens: {line:?}")));
        }
        if key.len() != n_qubits {
            return Err(ChannelError::Fixture(format!(
                "key {key:?} must have {n_qubits} base-4 digits"
            )));
        }
        let mut index = 0usize;
        for ch in key.chars() {
            let d = ch
                .to_digit(4)
                .ok_or_else(|| ChannelError::Fixture(format!("bad digit in key {key:?}")))?;
            index = index * 4 + d as usize;
        }
        if !alpha[index].is_nan() {
            return Err(ChannelError::Fixture(format!("duplicate key {key:?}")));
        }
        alpha[index] = value;
        seen += 1;
    }
    if seen != expected {
        return Err(ChannelError::Fixture(format!(
            "expected {expected} coefficients, found {seen}"
        )));
    }
    Ok(RandomHermitianCoeffs::new(n_qubits, alpha))
}

/// Coefficients of a bundled table. The leftmost key digit addresses the
/// highest qubit, so an index's base-4 digits match the key string.
pub fn coefficient_table(table: CoefficientTable) -> RandomHermitianCoeffs {
    parse_coefficients(table.raw(), table.n_qubits()).expect("bundled fixture is valid")
}

/// Parse a U3-parameter fixture (`<gate>.<param> value`, 10 gates).
pub fn parse_u3_parameters(raw: &str) -> Result<Vec<f64>, ChannelError> {
    let mut params = vec![f64::NAN; PARAM_COUNT_RANDOM_SPEC];
    let mut seen = 0usize;
    for line in data_lines(raw) {
        let mut parts = line.split_whitespace();
        let key = parts
            .next()
            .ok_or_else(|| ChannelError::Fixture(format!("malformed line: {line:?}")))?;
        let value: f64 = parts
            .next()
            .ok_or_else(|| ChannelError::Fixture(format!("missing value: {line:?}")))?
            .parse()
            .map_err(|e| ChannelError::Fixture(format!("bad value in {line:?}: {e}")))?;
        let (gate, param) = key
            .split_once('.')
            .ok_or_else(|| ChannelError::Fixture(format!("bad key {key:?}")))?;
        let gate: usize = gate
            .parse()
            .map_err(|_| ChannelError::Fixture(format!("bad gate index in {key:?}")))?;
        if !(1..=10).contains(&gate) {
            return Err(ChannelError::Fixture(format!("gate index out of range: {key:?}")));
        }
        let offset = match param {
            "theta" => 0,
            "phi" => 1,
            "lambda" => 2,
            other => {
                return Err(ChannelError::Fixture(format!("unknown parameter {other:?}")))
            }
        };
        let slot = (gate - 1) * 3 + offset;
        if !params[slot].is_nan() {
            return Err(ChannelError::Fixture(format!("duplicate key {key:?}")));
        }
        params[slot] = value;
        seen += 1;
    }
    if seen != PARAM_COUNT_RANDOM_SPEC {
        return Err(ChannelError::Fixture(format!(
            "expected {PARAM_COUNT_RANDOM_SPEC} parameters, found {seen}"
        )));
    }
    Ok(params)
}

/// Circuit built from the bundled target-circuit parameter table.
pub fn benchmark_target_circuit() -> CircuitSpec {
    let params = parse_u3_parameters(TABLE6).expect("bundled fixture is valid");
    random_circuit_spec_from_params(&params).expect("parameter count fixed")
}

/// Circuit built from the bundled perturbed-comparison parameter table.
pub fn benchmark_compare_circuit() -> CircuitSpec {
    let params = parse_u3_parameters(TABLE7).expect("bundled fixture is valid");
    random_circuit_spec_from_params(&params).expect("parameter count fixed")
}

pub fn benchmark_target_parameters() -> Vec<f64> {
    parse_u3_parameters(TABLE6).expect("bundled fixture is valid")
}

pub fn benchmark_compare_parameters() -> Vec<f64> {
    parse_u3_parameters(TABLE7).expect("bundled fixture is valid")
}

/// One row of the estimator budget schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduleRow {
    /// Total experiment budget l*m shared by both estimator kinds.
    pub total_lm: u64,
    pub zero_l: usize,
    pub zero_m: usize,
    pub proc_l: usize,
    /// Unique state preparations d*l for the process kind.
    pub proc_unique: usize,
    /// Per-eigenstate shot count m'; the per-setting total is d*m'.
    pub proc_shots: usize,
}

pub fn parse_schedule(raw: &str) -> Result<Vec<ScheduleRow>, ChannelError> {
    let mut rows = Vec::new();
    for line in data_lines(raw) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(ChannelError::Fixture(format!(
                "schedule rows need 6 fields: {line:?}"
            )));
        }
        let parse = |s: &str| -> Result<u64, ChannelError> {
            s.parse()
                .map_err(|e| ChannelError::Fixture(format!("bad schedule number {s:?}: {e}")))
        };
        rows.push(ScheduleRow {
            total_lm: parse(fields[0])?,
            zero_l: parse(fields[1])? as usize,
            zero_m: parse(fields[2])? as usize,
            proc_l: parse(fields[3])? as usize,
            proc_unique: parse(fields[4])? as usize,
            proc_shots: parse(fields[5])? as usize,
        });
    }
    if rows.is_empty() {
        return Err(ChannelError::Fixture("empty schedule".into()));
    }
    Ok(rows)
}

/// The bundled budget schedule.
pub fn budget_schedule() -> Vec<ScheduleRow> {
    parse_schedule(SCHEDULE).expect("bundled fixture is valid")
}

/// Check a key string's digits against an index (helper for tests).
pub fn key_matches_index(key: &str, index: usize) -> bool {
    let n = key.len();
    key.chars().enumerate().all(|(pos, ch)| {
        ch.to_digit(4)
            .map(|d| d as usize == base4_digit(index, n - 1 - pos))
            .unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{circuit_unitary, hermitian_from_coeffs};

    #[test]
    fn coefficient_tables_load_with_expected_counts() {
        for table in [
            CoefficientTable::Table1,
            CoefficientTable::Table3,
            CoefficientTable::Table4,
            CoefficientTable::Table5,
        ] {
            let c = coefficient_table(table);
            assert_eq!(c.alpha.len(), 64);
            assert!(c.alpha.iter().all(|a| a.is_finite() && a.abs() <= 1.0));
        }
        let two = coefficient_table(CoefficientTable::Table2);
        assert_eq!(two.alpha.len(), 16);
    }

    #[test]
    fn table1_trace_identity_coefficient() {
        // tr[H] = d * alpha_identity = 8 * 0.45631.
        let c = coefficient_table(CoefficientTable::Table1);
        assert_eq!(c.alpha[0], 0.45631);
        let h = hermitian_from_coeffs(&c);
        assert!((h.trace().re - 8.0 * 0.45631).abs() < 1e-10);
        assert!(h.hermitian_deviation() < 1e-12);
        // Spot values, exactly as printed.
        assert_eq!(c.alpha[0b000111], 0.45888); // key 013 -> index 0*16+1*4+3
        assert_eq!(c.alpha[52], 0.855704); // key 310
    }

    #[test]
    fn u3_tables_load_and_differ_by_small_offsets() {
        let target = benchmark_target_parameters();
        let compare = benchmark_compare_parameters();
        assert_eq!(target.len(), 30);
        assert_eq!(compare.len(), 30);
        for (a, b) in target.iter().zip(&compare) {
            let diff = b - a;
            assert!(
                (-0.4..=0.4).contains(&diff),
                "offset {diff} outside the perturbation interval"
            );
        }
        assert_eq!(target[0], 4.84482);
        assert_eq!(compare[11], -0.15634); // gate 4 lambda
    }

    #[test]
    fn benchmark_circuits_are_unitary() {
        let u = circuit_unitary(&benchmark_target_circuit()).unwrap();
        assert!(u.is_unitary(1e-9));
        let v = circuit_unitary(&benchmark_compare_circuit()).unwrap();
        assert!(v.is_unitary(1e-9));
    }

    #[test]
    fn schedule_matches_published_rows() {
        let rows = budget_schedule();
        assert_eq!(rows.len(), 10);
        // Row lm = 14336: zero uses l=112, m=128; process uses l=112 with
        // dl=896 unique settings and m'=16.
        let row = rows.iter().find(|r| r.total_lm == 14336).unwrap();
        assert_eq!((row.zero_l, row.zero_m), (112, 128));
        assert_eq!((row.proc_l, row.proc_unique, row.proc_shots), (112, 896, 16));
        // Last row: process l capped at 112 while zero reaches l=896.
        let last = rows.last().unwrap();
        assert_eq!(last.total_lm, 917504);
        assert_eq!(last.zero_l, 896);
        assert_eq!(last.proc_l, 112);
        assert_eq!(last.proc_shots, 1024);
        // Budget consistency on every row.
        for r in &rows {
            assert_eq!(r.total_lm, (r.zero_l * r.zero_m) as u64, "zero budget row {}", r.total_lm);
            assert_eq!(
                r.total_lm,
                (r.proc_unique * r.proc_shots) as u64,
                "process budget row {}",
                r.total_lm
            );
            assert_eq!(r.proc_unique, 8 * r.proc_l);
            assert!(r.proc_unique <= 900, "unique-settings cap");
        }
    }

    #[test]
    fn parser_rejects_malformed_fixtures() {
        assert!(parse_coefficients("00 0.5", 1).is_err()); // wrong key length
        assert!(parse_coefficients("0 0.5\n0 0.4\n1 0.1\n2 0.2", 1).is_err()); // duplicate
        assert!(parse_coefficients("0 0.5", 1).is_err()); // missing coefficients
        assert!(parse_u3_parameters("1.theta 0.5").is_err());
        assert!(parse_u3_parameters("11.theta 0.5").is_err());
        assert!(parse_schedule("1 2 3").is_err());
    }

    #[test]
    fn key_digit_convention() {
        assert!(key_matches_index("013", 0 * 16 + 1 * 4 + 3));
        assert!(key_matches_index("310", 3 * 16 + 1 * 4 + 0));
        assert!(!key_matches_index("013", 1));
    }
}
