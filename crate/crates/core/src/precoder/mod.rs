//! High-rate LDPC precode: PEG construction, systematic encoder, sum-product
//! decoder and a plain-text parity-check format.
//!
//! Codewords are laid out systematically: the `k_msg` message bits first,
//! then the `n − k_msg` parity bits. Generation permutes the columns of the
//! PEG matrix so that the last `n − k_msg` columns are independent, which
//! makes the parity part a dense linear function of the message.

mod peg;
mod sum_product;

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

pub use sum_product::{ldpc_decode, LdpcDecodeOutput};

/// Attempts at drawing a full-rank matrix before giving up.
const RANK_ATTEMPTS: usize = 16;

/// Binary LDPC code with a systematic encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcCode {
    n: usize,
    k_msg: usize,
    checks: Vec<Vec<usize>>,
    var_checks: Vec<Vec<usize>>,
    /// Row `r` holds the message coefficients of parity bit `r`.
    parity_gen: Vec<Vec<u64>>,
}

fn words(bits: usize) -> usize {
    bits.div_ceil(64)
}

fn get_bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

fn set_bit(row: &mut [u64], j: usize) {
    row[j / 64] |= 1 << (j % 64);
}

impl LdpcCode {
    /// Builds the code from check rows, reordering columns when needed so that
    /// the parity bits sit at the end. Fails when the rows are dependent.
    pub fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        let m = checks.len();
        if m == 0 || m >= n {
            return Err(Error::InvalidConfiguration(format!(
                "{m} checks over {n} bits"
            )));
        }
        for row in &checks {
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidConfiguration(format!(
                    "bit index {v} out of range"
                )));
            }
        }
        let w = words(n);
        let mut dense: Vec<Vec<u64>> = checks
            .iter()
            .map(|row| {
                let mut r = vec![0u64; w];
                for &v in row {
                    r[v / 64] ^= 1 << (v % 64);
                }
                r
            })
            .collect();

        // Gauss-Jordan, taking pivot columns from the right end first.
        let mut pivots = Vec::with_capacity(m);
        let mut r = 0;
        for col in (0..n).rev() {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| get_bit(&dense[i], col)) else {
                continue;
            };
            dense.swap(r, p);
            let pivot_row = dense[r].clone();
            for (i, row) in dense.iter_mut().enumerate() {
                if i != r && get_bit(row, col) {
                    row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
            r += 1;
        }
        if pivots.len() < m {
            return Err(Error::InvalidConfiguration(format!(
                "parity-check matrix has rank {} < {m}",
                pivots.len()
            )));
        }

        // New column order: non-pivot columns, then pivot columns, each
        // ascending. A matrix already in this layout maps to itself.
        let mut is_pivot = vec![false; n];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut by_col: Vec<(usize, usize)> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        by_col.sort_unstable();
        let mut new_pos = vec![0usize; n];
        for (i, &c) in info_cols
            .iter()
            .chain(by_col.iter().map(|(c, _)| c))
            .enumerate()
        {
            new_pos[c] = i;
        }
        let k_msg = n - m;
        let parity_gen = by_col
            .iter()
            .map(|&(_, r)| &dense[r])
            .map(|row| {
                let mut g = vec![0u64; words(k_msg)];
                for (j, &c) in info_cols.iter().enumerate() {
                    if get_bit(row, c) {
                        set_bit(&mut g, j);
                    }
                }
                g
            })
            .collect();
        let checks: Vec<Vec<usize>> = checks
            .into_iter()
            .map(|row| {
                let mut r: Vec<usize> = row.into_iter().map(|c| new_pos[c]).collect();
                r.sort_unstable();
                r
            })
            .collect();
        let mut var_checks = vec![Vec::new(); n];
        for (ci, row) in checks.iter().enumerate() {
            for &v in row {
                var_checks[v].push(ci);
            }
        }
        Ok(LdpcCode {
            n,
            k_msg,
            checks,
            var_checks,
            parity_gen,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_msg(&self) -> usize {
        self.k_msg
    }

    pub fn n_checks(&self) -> usize {
        self.checks.len()
    }

    pub fn rate(&self) -> f64 {
        self.k_msg as f64 / self.n as f64
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    pub fn var_checks(&self) -> &[Vec<usize>] {
        &self.var_checks
    }

    /// Parity of every check over `bits`.
    pub fn syndrome(&self, bits: &[u8]) -> Vec<u8> {
        self.checks
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &v| acc ^ (bits[v] & 1)))
            .collect()
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        bits.len() == self.n
            && self
                .checks
                .iter()
                .all(|row| row.iter().fold(0u8, |acc, &v| acc ^ (bits[v] & 1)) == 0)
    }

    /// Systematic codeword `[msg | parity]`.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k_msg {
            return Err(Error::LengthMismatch {
                expected: self.k_msg,
                actual: msg.len(),
            });
        }
        let mut packed = vec![0u64; words(self.k_msg)];
        for (j, &b) in msg.iter().enumerate() {
            if b & 1 == 1 {
                set_bit(&mut packed, j);
            }
        }
        let mut cw = msg.iter().map(|b| b & 1).collect::<Vec<u8>>();
        cw.extend(self.parity_gen.iter().map(|g| {
            let ones: u32 = g
                .iter()
                .zip(&packed)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            (ones & 1) as u8
        }));
        Ok(cw)
    }

    /// Writes one check per line as space-separated bit indices, after a
    /// `# ldpc n=<n> m=<m>` header line.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        let mut s = format!("# ldpc n={} m={}\n", self.n, self.checks.len());
        for row in &self.checks {
            let mut first = true;
            for v in row {
                if !first {
                    s.push(' ');
                }
                first = false;
                write!(s, "{v}").expect("writing to a String");
            }
            s.push('\n');
        }
        out.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut n = None;
        let mut checks = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if let Some(header) = line.strip_prefix('#') {
                for tok in header.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("n=") {
                        n =
                            Some(v.parse().map_err(|_| {
                                Error::ParseParity(format!("bad header token {tok}"))
                            })?);
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::ParseParity(format!("bad index {t}")))
                })
                .collect::<Result<Vec<_>>>()?;
            checks.push(row);
        }
        let n = match n {
            Some(n) => n,
            None => checks.iter().flatten().max().map(|&v| v + 1).unwrap_or(0),
        };
        Self::from_checks(n, checks)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_text(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_text(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// PEG-style code of length `n` and the given rate with regular variable
/// degree `var_degree`. The number of checks is `round(n (1 − rate))`.
pub fn ldpc_generate<R: Rng + ?Sized>(
    n: usize,
    rate: f64,
    var_degree: usize,
    rng: &mut R,
) -> Result<LdpcCode> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidConfiguration(format!(
            "rate {rate} outside (0, 1)"
        )));
    }
    let m = (n as f64 * (1.0 - rate)).round() as usize;
    if var_degree == 0 || m < var_degree || m >= n {
        return Err(Error::InvalidConfiguration(format!(
            "{m} checks cannot host variable degree {var_degree} at n = {n}"
        )));
    }
    let mut last = None;
    for _ in 0..RANK_ATTEMPTS {
        let checks = peg::peg_checks(n, m, var_degree, rng);
        match LdpcCode::from_checks(n, checks) {
            Ok(code) => return Ok(code),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Systematic encoding; see [`LdpcCode::encode`].
pub fn ldpc_encode(code: &LdpcCode, msg: &[u8]) -> Result<Vec<u8>> {
    code.encode(msg)
}
