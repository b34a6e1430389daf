//! Classical codes and critical arrays.
//!
//! An `r x N` array over `q` symbols is a `k`-critical array CA(r, N, q, k)
//! when no `k` columns carry a repeated `k`-tuple while every choice of `k - 1`
//! columns carries at least one repeated `(k - 1)`-tuple. A code of length
//! `N`, minimum distance `d` and more than `q^(N-d)` words is a
//! CA(r, N, q, N - d + 1).

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{Pow, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, ExactScalar, Limits};
use crate::tensor::{BasisLabel, PureVector, SystemShape};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeArray {
    q: usize,
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl CodeArray {
    pub fn new(q: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        if !(2..=256).contains(&q) {
            return Err(Error::InvalidCode(format!("alphabet size {q} not in 2..=256")));
        }
        if rows.len() < 2 {
            return Err(Error::InvalidCode("at least two rows are required".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidCode("rows are empty".into()));
        }
        let mut seen: HashMap<&[u8], usize> = HashMap::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCode(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&s) = row.iter().find(|&&s| s as usize >= q) {
                return Err(Error::InvalidCode(format!("row {i} has symbol {s} >= q = {q}")));
            }
            if let Some(j) = seen.insert(row, i) {
                return Err(Error::InvalidCode(format!("rows {j} and {i} are equal")));
            }
        }
        Ok(CodeArray { q, n, rows })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Word length `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn shape(&self) -> SystemShape {
        SystemShape::new(self.n, self.q).expect("validated on construction")
    }

    /// One line per row; digits run together for `q <= 10`, otherwise
    /// symbols are space separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            if self.q <= 10 {
                for s in row {
                    let _ = write!(out, "{s}");
                }
            } else {
                let parts: Vec<String> = row.iter().map(u8::to_string).collect();
                out.push_str(&parts.join(" "));
            }
            out.push('\n');
        }
        out
    }

    /// SHA-256 over `q=<q>\n` followed by [`CodeArray::to_text`].
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("q={}\n", self.q).as_bytes());
        h.update(self.to_text().as_bytes());
        hex::encode(h.finalize())
    }
}

/// Parses one codeword per line. Blank lines and lines starting with `#` are
/// skipped. A line containing whitespace is read as separated integers,
/// otherwise as contiguous digits.
pub fn parse_code(text: &str, q: usize) -> Result<CodeArray> {
    if q < 2 {
        return Err(Error::InvalidCode(format!("alphabet size {q} < 2")));
    }
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut line_of: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::CodeParse { line: line_no, msg };
        let row: Vec<u8> = if line.contains(char::is_whitespace) {
            line.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&s| s < q)
                        .map(|s| s as u8)
                        .ok_or_else(|| err(format!("symbol `{t}` not in 0..{q}")))
                })
                .collect::<Result<_>>()?
        } else {
            if q > 10 {
                return Err(err("symbols must be whitespace separated when q > 10".into()));
            }
            line.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&s| (s as usize) < q)
                        .map(|s| s as u8)
                        .ok_or_else(|| err(format!("symbol `{c}` not in 0..{q}")))
                })
                .collect::<Result<_>>()?
        };
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(err(format!("row has {} symbols, expected {w}", row.len())))
            }
            _ => {}
        }
        if let Some(prev) = line_of.insert(row.clone(), line_no) {
            return Err(err(format!("duplicate of line {prev}")));
        }
        rows.push(row);
    }
    CodeArray::new(q, rows)
}

pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Minimum pairwise Hamming distance.
pub fn min_distance(code: &CodeArray) -> usize {
    let rows = code.rows();
    let mut best = usize::MAX;
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            best = best.min(hamming(&rows[i], &rows[j]));
        }
    }
    best
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for i in (pos + 1)..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// First pair of rows (in row order) that agree on every listed column.
pub fn first_repeat(code: &CodeArray, columns: &[usize]) -> Option<(usize, usize)> {
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in code.rows().iter().enumerate() {
        let key: Vec<u8> = columns.iter().map(|&c| row[c]).collect();
        if let Some(&j) = seen.get(&key) {
            if best.is_none_or(|b| (j, i) < b) {
                best = Some((j, i));
            }
        } else {
            seen.insert(key, i);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaViolation {
    /// `k` outside `1..=N`.
    Strength { k: usize, n: usize },
    /// Condition (i): two rows agree on all of these `k` columns.
    RepeatedTuple { columns: Vec<usize>, rows: (usize, usize) },
    /// Condition (ii): these `k - 1` columns carry no repeated tuple.
    NoRepeat { columns: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalArrayReport {
    pub k: usize,
    pub violation: Option<CaViolation>,
}

impl CriticalArrayReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn is_critical_array(code: &CodeArray, k: usize) -> CriticalArrayReport {
    let n = code.n();
    if k == 0 || k > n {
        return CriticalArrayReport {
            k,
            violation: Some(CaViolation::Strength { k, n }),
        };
    }
    for columns in combinations(n, k) {
        if let Some(rows) = first_repeat(code, &columns) {
            return CriticalArrayReport {
                k,
                violation: Some(CaViolation::RepeatedTuple { columns, rows }),
            };
        }
    }
    for columns in combinations(n, k - 1) {
        if first_repeat(code, &columns).is_none() {
            return CriticalArrayReport {
                k,
                violation: Some(CaViolation::NoRepeat { columns }),
            };
        }
    }
    CriticalArrayReport { k, violation: None }
}

/// Smallest `k` for which the array is `k`-critical, if any.
pub fn critical_strength(code: &CodeArray) -> Option<usize> {
    (1..=code.n()).find(|&k| is_critical_array(code, k).holds())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaParams {
    pub r: usize,
    pub n: usize,
    pub q: usize,
    pub k: usize,
}

fn exceeds_power(r: usize, q: usize, exp: usize) -> bool {
    BigUint::from(r) > Pow::pow(BigUint::from(q), exp)
}

/// `CA(r, N, q, N-d+1)` when `r > q^(N-d)`.
pub fn code_to_ca_params(code: &CodeArray) -> Option<CaParams> {
    let d = min_distance(code);
    let (r, n, q) = (code.r(), code.n(), code.q());
    exceeds_power(r, q, n - d).then_some(CaParams {
        r,
        n,
        q,
        k: n - d + 1,
    })
}

/// `m = N - d` when `N <= 2d - 2` and `r > q^(N-d)`.
pub fn corollary_gate(code: &CodeArray) -> Option<usize> {
    let d = min_distance(code);
    let (r, n, q) = (code.r(), code.n(), code.q());
    (n + 2 <= 2 * d && exceeds_power(r, q, n - d)).then_some(n - d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub code: Option<CodeArray>,
    /// Node expansions used.
    pub nodes: u64,
    /// True when the search stopped on the budget rather than finishing.
    pub budget_exhausted: bool,
}

/// Depth-first search for `r_target` words of length `n` over `q` symbols at
/// pairwise distance `>= d`.
///
/// The all-zero word is always taken first (translating a code by a word
/// preserves distances). Candidates are visited in lexicographic order, so
/// the first descent is the greedy lexicode and the whole traversal is
/// deterministic. `budget` caps node expansions.
pub fn search_code(
    n: usize,
    q: usize,
    d: usize,
    r_target: usize,
    budget: u64,
    limits: &Limits,
) -> Result<SearchOutcome> {
    if !(2..=256).contains(&q) || n == 0 || r_target < 2 {
        return Err(Error::InvalidCode(format!(
            "search needs q in 2..=256, N >= 1, r >= 2 (got q={q}, N={n}, r={r_target})"
        )));
    }
    let space = Pow::pow(BigUint::from(q), n);
    if space > BigUint::from(limits.max_search_space) {
        return Err(Error::Guard {
            what: "code search space q^N",
            needed: space.to_string(),
            limit: limits.max_search_space,
        });
    }
    let total: usize = space.try_into().expect("bounded by the guard");
    let mut words = vec![0u8; total * n];
    for w in 0..total {
        let mut rest = w;
        for pos in (0..n).rev() {
            words[w * n + pos] = (rest % q) as u8;
            rest /= q;
        }
    }
    let mut search = Search {
        n,
        d,
        r_target,
        budget,
        nodes: 0,
        words: &words,
        hit_budget: false,
    };
    let zero = 0u32;
    let first: Vec<u32> = (1..total as u32)
        .filter(|&v| search.dist(zero, v) >= d)
        .collect();
    let mut chosen = vec![zero];
    let found = search.dfs(&mut chosen, &first);
    let code = if found {
        let rows = chosen
            .iter()
            .map(|&w| search.word(w).to_vec())
            .collect();
        let code = CodeArray::new(q, rows)?;
        debug_assert!(min_distance(&code) >= d);
        if min_distance(&code) < d {
            return Err(Error::InvalidCode("search produced a code below distance".into()));
        }
        Some(code)
    } else {
        None
    };
    Ok(SearchOutcome {
        code,
        nodes: search.nodes,
        budget_exhausted: search.hit_budget,
    })
}

struct Search<'a> {
    n: usize,
    d: usize,
    r_target: usize,
    budget: u64,
    nodes: u64,
    words: &'a [u8],
    hit_budget: bool,
}

impl Search<'_> {
    fn word(&self, w: u32) -> &[u8] {
        let w = w as usize;
        &self.words[w * self.n..(w + 1) * self.n]
    }

    fn dist(&self, a: u32, b: u32) -> usize {
        hamming(self.word(a), self.word(b))
    }

    fn dfs(&mut self, chosen: &mut Vec<u32>, cands: &[u32]) -> bool {
        if chosen.len() >= self.r_target {
            return true;
        }
        for (idx, &w) in cands.iter().enumerate() {
            if chosen.len() + (cands.len() - idx) < self.r_target {
                return false;
            }
            if self.nodes >= self.budget {
                self.hit_budget = true;
                return false;
            }
            self.nodes += 1;
            let next: Vec<u32> = cands[idx + 1..]
                .iter()
                .copied()
                .filter(|&v| self.dist(w, v) >= self.d)
                .collect();
            chosen.push(w);
            if self.dfs(chosen, &next) {
                return true;
            }
            chosen.pop();
            if self.hit_budget {
                return false;
            }
        }
        false
    }
}

const CA_10_7_3_3: [&str; 10] = [
    "0000000", "0012211", "0120121", "0201112", "1011120", "1101201", "1110012", "2022102",
    "2202021", "2220210",
];

/// The ternary 10 x 7 array that is both a CA(10,7,3,3) and a (7,10,5)_3 code.
pub fn builtin_ca_10_7_3_3() -> CodeArray {
    parse_code(&CA_10_7_3_3.join("\n"), 3).expect("builtin array is valid")
}

/// `|A> = sum_i c_i |row_i>`.
pub fn state_from_array(code: &CodeArray, coeffs: &[ExactScalar]) -> Result<PureVector> {
    if coeffs.len() != code.r() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} rows",
            coeffs.len(),
            code.r()
        )));
    }
    if let Some(i) = coeffs.iter().position(Zero::is_zero) {
        return Err(Error::InvalidCode(format!(
            "coefficient {i} is {}; all must be nonzero",
            format_rational(&coeffs[i])
        )));
    }
    let shape = code.shape();
    let terms = code
        .rows()
        .iter()
        .zip(coeffs)
        .map(|(row, c)| Ok((BasisLabel::new(row.clone(), shape)?, c.clone())))
        .collect::<Result<Vec<_>>>()?;
    PureVector::new(shape, terms)
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..q).take_while(|p| p * p <= q).all(|p| q % p != 0)
}

/// Rows are all `q^k` messages `x` in lexicographic order; column `j` holds
/// `<forms[j], x> mod q`. The result has strength `k` exactly when every `k`
/// of the forms are linearly independent over GF(q).
pub fn linear_orthogonal_array(q: usize, forms: &[Vec<u8>]) -> Result<CodeArray> {
    if !is_prime(q) {
        return Err(Error::InvalidCode(format!("q = {q} is not prime")));
    }
    let k = forms.first().map_or(0, Vec::len);
    if k == 0 || forms.iter().any(|f| f.len() != k) {
        return Err(Error::InvalidCode("forms must share a positive length".into()));
    }
    let total = q.pow(k as u32);
    let mut rows = Vec::with_capacity(total);
    for m in 0..total {
        let mut msg = vec![0usize; k];
        let mut rest = m;
        for slot in msg.iter_mut().rev() {
            *slot = rest % q;
            rest /= q;
        }
        rows.push(
            forms
                .iter()
                .map(|f| (f.iter().zip(&msg).map(|(&a, &x)| a as usize * x).sum::<usize>() % q) as u8)
                .collect(),
        );
    }
    CodeArray::new(q, rows)
}

/// Forms of the Reed-Solomon evaluation map: points `0..n-1` (or `0..q-1`
/// plus the point at infinity when `n = q + 1`), polynomials of degree `< k`.
pub fn reed_solomon_forms(q: usize, k: usize, n: usize) -> Result<Vec<Vec<u8>>> {
    if !is_prime(q) || k == 0 || n < k || n > q + 1 {
        return Err(Error::InvalidCode(format!(
            "no Reed-Solomon forms for q={q}, k={k}, n={n}"
        )));
    }
    let mut forms: Vec<Vec<u8>> = (0..n.min(q))
        .map(|x| (0..k).map(|e| (x.pow(e as u32) % q) as u8).collect())
        .collect();
    if n == q + 1 {
        let mut inf = vec![0u8; k];
        inf[k - 1] = 1;
        forms.push(inf);
    }
    Ok(forms)
}
