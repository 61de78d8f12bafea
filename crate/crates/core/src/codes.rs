//! Stabilizer code registry and the plain-text code file format.
//!
//! Generators for the three 9-qubit codes are fixed letter strings. The
//! `[[5,1,3]]` and `[[7,1,3]]` codes use row-reduced generator sets.
//!
//! File format:
//!
//! ```text
//! name=913
//! n=9
//! k=1
//! d=3
//! H:
//! YIZIIIIXY
//! ...
//! X:
//! ZIIIIIIXX
//! Z:
//! ZZIIIIIIZ
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Identifier of a built-in code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodeId {
    Nine1,
    Nine2,
    Nine3,
    Five,
    Steane,
}

impl CodeId {
    pub const ALL: [CodeId; 5] = [
        CodeId::Nine1,
        CodeId::Nine2,
        CodeId::Nine3,
        CodeId::Five,
        CodeId::Steane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CodeId::Nine1 => "913",
            CodeId::Nine2 => "923",
            CodeId::Nine3 => "933",
            CodeId::Five => "513",
            CodeId::Steane => "713",
        }
    }

    /// Number of logical pairs produced by one block.
    pub fn k(self) -> u64 {
        match self {
            CodeId::Nine2 => 2,
            CodeId::Nine3 => 3,
            _ => 1,
        }
    }

    pub fn n(self) -> u64 {
        match self {
            CodeId::Five => 5,
            CodeId::Steane => 7,
            _ => 9,
        }
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches("[[").trim_end_matches("]]");
        let compact: String = t.chars().filter(|c| c.is_ascii_digit()).collect();
        CodeId::ALL
            .into_iter()
            .find(|c| c.name() == compact)
            .ok_or_else(|| Error::UnknownCode(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub stabilizers: Vec<PauliString>,
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
}

const TABLE_913: ([&str; 8], [&str; 1], [&str; 1]) = (
    [
        "YIZIIIIXY",
        "ZYZIIIIIX",
        "ZZYIIIIXI",
        "IIIXIIIII",
        "IIIIXIIII",
        "IIIIIXIII",
        "IIIIIIXII",
        "IZZIIIIZZ",
    ],
    ["ZIIIIIIXX"],
    ["ZZIIIIIIZ"],
);

const TABLE_923: ([&str; 7], [&str; 2], [&str; 2]) = (
    [
        "YZZZIIXII",
        "ZYZIZIXYY",
        "ZIYZIIXYX",
        "ZIIXIIIIY",
        "IIZIYIIXI",
        "IIIIIXIII",
        "ZZZZZIZZZ",
    ],
    ["IZZIIIXXI", "IZIZIIXIX"],
    ["IZZIZIIZI", "IZZZIIIIZ"],
);

const TABLE_933: ([&str; 6], [&str; 3], [&str; 3]) = (
    [
        "YZIZIIYXX",
        "IXZZIXYIY",
        "ZIYZIXIYX",
        "IZIYIXXYZ",
        "IIIIXIIII",
        "ZZZZIZZZZ",
    ],
    ["ZZIIIXXII", "IIZZIXIXI", "IZIZIXIIX"],
    ["ZZIZIIZII", "ZIZZIIIZI", "ZZZIIIIIZ"],
);

// Five-qubit code with the X part in reduced form.
const TABLE_513: ([&str; 4], [&str; 1], [&str; 1]) = (["YZIZY", "IXZZX", "ZZXIX", "ZIZYY"], ["ZIIZX"], ["ZZZZZ"]);

// Steane code, generator rows in reduced echelon form.
const TABLE_713: ([&str; 6], [&str; 1], [&str; 1]) = (
    ["XIXIXIX", "IXXIIXX", "IIIXXXX", "ZIZIZIZ", "IZZIIZZ", "IIIZZZZ"],
    ["XXXXXXX"],
    ["ZZZZZZZ"],
);

fn parse_rows(rows: &[&str]) -> Vec<PauliString> {
    rows.iter().map(|r| r.parse().expect("builtin table entry")).collect()
}

impl StabilizerCode {
    pub fn new(
        name: impl Into<String>,
        d: usize,
        stabilizers: Vec<PauliString>,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidCode {
            name: name.clone(),
            reason,
        };
        let n = stabilizers
            .first()
            .or(logical_x.first())
            .map(|p| p.num_qubits())
            .ok_or_else(|| invalid("no operators".into()))?;
        if let Some(bad) = stabilizers
            .iter()
            .chain(&logical_x)
            .chain(&logical_z)
            .find(|p| p.num_qubits() != n)
        {
            return Err(invalid(format!("operator {bad} does not act on {n} qubits")));
        }
        if stabilizers.len() > n {
            return Err(invalid(format!("{} stabilizers on {n} qubits", stabilizers.len())));
        }
        let k = n - stabilizers.len();
        if logical_x.len() != k || logical_z.len() != k {
            return Err(invalid(format!(
                "expected {k} logical X and Z operators, got {} and {}",
                logical_x.len(),
                logical_z.len()
            )));
        }
        Ok(StabilizerCode {
            name,
            n,
            k,
            d,
            stabilizers,
            logical_x,
            logical_z,
        })
    }

    /// Number of stabilizer generators, `n - k`.
    pub fn num_stabilizers(&self) -> usize {
        self.stabilizers.len()
    }

    /// Syndrome bits packed little-endian: bit `i` is set iff `error`
    /// anticommutes with stabilizer `i`. No length check.
    #[inline]
    pub(crate) fn syndrome_bits(&self, error: &PauliString) -> u64 {
        self.stabilizers
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, s)| acc | ((error.anticommutes_raw(s) as u64) << i))
    }

    pub fn logicals(&self) -> impl Iterator<Item = &PauliString> {
        self.logical_x.iter().chain(&self.logical_z)
    }

    /// Serializes in the code file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("name={}\nn={}\nk={}\nd={}\n", self.name, self.n, self.k, self.d);
        for (header, ops) in [
            ("H:", &self.stabilizers),
            ("X:", &self.logical_x),
            ("Z:", &self.logical_z),
        ] {
            out.push_str(header);
            out.push('\n');
            for p in ops {
                out.push_str(&p.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        #[derive(Clone, Copy)]
        enum Section {
            Header,
            H,
            X,
            Z,
        }
        let mut section = Section::Header;
        let (mut name, mut n, mut k, mut d) = (None, None, None, None);
        let (mut h, mut lx, mut lz) = (Vec::new(), Vec::new(), Vec::new());
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let fail = |reason: String| Error::CodeFormat { line: line_no, reason };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "H:" => section = Section::H,
                "X:" => section = Section::X,
                "Z:" => section = Section::Z,
                _ if line.contains('=') => {
                    let (key, value) = line.split_once('=').expect("contains '='");
                    let (key, value) = (key.trim(), value.trim());
                    let number = || {
                        value
                            .parse::<usize>()
                            .map_err(|_| fail(format!("{key} must be a non-negative integer, got {value:?}")))
                    };
                    match key {
                        "name" => name = Some(value.to_string()),
                        "n" => n = Some(number()?),
                        "k" => k = Some(number()?),
                        "d" => d = Some(number()?),
                        other => return Err(fail(format!("unknown header {other:?}"))),
                    }
                }
                _ => {
                    let p: PauliString = line.parse().map_err(|e: Error| fail(e.to_string()))?;
                    match section {
                        Section::Header => return Err(fail("operator before any H:/X:/Z: section".into())),
                        Section::H => h.push(p),
                        Section::X => lx.push(p),
                        Section::Z => lz.push(p),
                    }
                }
            }
        }
        let name = name.ok_or(Error::CodeFormat {
            line: 0,
            reason: "missing name= header".into(),
        })?;
        let d = d.ok_or(Error::CodeFormat {
            line: 0,
            reason: "missing d= header".into(),
        })?;
        let code = StabilizerCode::new(name, d, h, lx, lz)?;
        if n.is_some_and(|n| n != code.n) || k.is_some_and(|k| k != code.k) {
            return Err(Error::InvalidCode {
                name: code.name,
                reason: format!(
                    "header n={:?}, k={:?} disagrees with operators (n={}, k={})",
                    n, k, code.n, code.k
                ),
            });
        }
        Ok(code)
    }
}

pub fn builtin_code(id: CodeId) -> StabilizerCode {
    let (h, x, z) = match id {
        CodeId::Nine1 => (
            parse_rows(&TABLE_913.0),
            parse_rows(&TABLE_913.1),
            parse_rows(&TABLE_913.2),
        ),
        CodeId::Nine2 => (
            parse_rows(&TABLE_923.0),
            parse_rows(&TABLE_923.1),
            parse_rows(&TABLE_923.2),
        ),
        CodeId::Nine3 => (
            parse_rows(&TABLE_933.0),
            parse_rows(&TABLE_933.1),
            parse_rows(&TABLE_933.2),
        ),
        CodeId::Five => (
            parse_rows(&TABLE_513.0),
            parse_rows(&TABLE_513.1),
            parse_rows(&TABLE_513.2),
        ),
        CodeId::Steane => (
            parse_rows(&TABLE_713.0),
            parse_rows(&TABLE_713.1),
            parse_rows(&TABLE_713.2),
        ),
    };
    StabilizerCode::new(id.name(), 3, h, x, z).expect("builtin tables are well formed")
}

/// Looks a builtin code up by its textual name (`"913"`, `"[[9,1,3]]"`, ...).
pub fn builtin_code_by_name(name: &str) -> Result<StabilizerCode> {
    Ok(builtin_code(name.parse()?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub code: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{}\t{}\t{}\t{}",
                self.code,
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.detail
            )?;
        }
        Ok(())
    }
}

/// Rank over GF(2) of the symplectic rows `(x | z)`.
pub fn symplectic_rank(ops: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = ops
        .iter()
        .map(|p| ((p.x_bits() as u128) << 64) | p.z_bits() as u128)
        .collect();
    let mut rank = 0;
    for bit in (0..128).rev() {
        let Some(pivot) = (rank..rows.len()).find(|&i| (rows[i] >> bit) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pv = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && (*r >> bit) & 1 == 1 {
                *r ^= pv;
            }
        }
        rank += 1;
    }
    rank
}

/// Runs every structural check. With `verify_distance`, also computes the
/// minimum logical weight exhaustively (only attempted for `n <= 9`).
pub fn validate_code(code: &StabilizerCode, verify_distance: bool) -> ValidationReport {
    let mut checks = Vec::new();

    let rank = symplectic_rank(&code.stabilizers);
    let m = code.num_stabilizers();
    checks.push(Check {
        name: "independence",
        passed: rank == m && m + code.k == code.n,
        detail: format!("symplectic rank {rank}, {m} generators, n-k = {}", code.n - code.k),
    });

    let mut bad = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if code.stabilizers[i].anticommutes_raw(&code.stabilizers[j]) {
                bad.push(format!("S{i}/S{j}"));
            }
        }
    }
    checks.push(Check {
        name: "stabilizers_commute",
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "all generator pairs commute".into()
        } else {
            format!("anticommuting generators: {}", bad.join(", "))
        },
    });

    let mut bad = Vec::new();
    for (kind, ops) in [("X", &code.logical_x), ("Z", &code.logical_z)] {
        for (l, op) in ops.iter().enumerate() {
            for (i, s) in code.stabilizers.iter().enumerate() {
                if op.anticommutes_raw(s) {
                    bad.push(format!("{kind}{l}/S{i}"));
                }
            }
        }
    }
    checks.push(Check {
        name: "logicals_commute_with_stabilizers",
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "ok".into()
        } else {
            format!("anticommuting pairs: {}", bad.join(", "))
        },
    });

    let mut bad = Vec::new();
    for (i, x) in code.logical_x.iter().enumerate() {
        for (j, z) in code.logical_z.iter().enumerate() {
            if x.anticommutes_raw(z) != (i == j) {
                bad.push(format!("X{i}/Z{j}"));
            }
        }
    }
    for (kind, ops) in [("X", &code.logical_x), ("Z", &code.logical_z)] {
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if ops[i].anticommutes_raw(&ops[j]) {
                    bad.push(format!("{kind}{i}/{kind}{j}"));
                }
            }
        }
    }
    checks.push(Check {
        name: "logical_pattern",
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "X_i anticommutes with Z_j iff i == j".into()
        } else {
            format!("wrong commutation: {}", bad.join(", "))
        },
    });

    if verify_distance && code.n <= 9 && checks.iter().all(|c| c.passed) {
        let d = min_logical_weight(code);
        checks.push(Check {
            name: "distance",
            passed: d == Some(code.d),
            detail: format!("declared d={}, exhaustive minimum {:?}", code.d, d),
        });
    }

    ValidationReport {
        code: code.name.clone(),
        checks,
    }
}

/// Smallest weight of a Pauli that commutes with all stabilizers but is not in
/// the stabilizer group, i.e. a nontrivial logical operator.
pub fn min_logical_weight(code: &StabilizerCode) -> Option<usize> {
    let all = PauliString::enumerate_canonical(code.n).ok()?;
    let stab_rank = symplectic_rank(&code.stabilizers);
    let mut with = code.stabilizers.clone();
    all.into_iter().skip(1).find_map(|p| {
        if code.stabilizers.iter().any(|s| p.anticommutes_raw(s)) {
            return None;
        }
        with.push(p);
        let in_group = symplectic_rank(&with) == stab_rank;
        with.pop();
        (!in_group).then(|| p.weight())
    })
}
