//! Sobol points via the Gray-code recurrence.
//!
//! Direction numbers come from the bundled Joe–Kuo table in
//! `data/sobol_directions.txt`; its header records the largest supported
//! dimension.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const BITS: usize = 32;
const TABLE: &str = include_str!("../data/sobol_directions.txt");

struct DirectionTable {
    max_dimension: usize,
    /// `directions[j][c]` for coordinate `j` and bit `c`.
    directions: Vec<[u32; BITS]>,
}

fn table() -> &'static DirectionTable {
    static TABLE_CELL: OnceLock<DirectionTable> = OnceLock::new();
    TABLE_CELL.get_or_init(|| parse_table(TABLE).expect("bundled Sobol table is well formed"))
}

/// Number of coordinates the bundled direction numbers support.
pub fn max_dimension() -> usize {
    table().max_dimension
}

fn parse_table(text: &str) -> Result<DirectionTable, String> {
    let mut max_dimension = None;
    let mut directions = vec![van_der_corput()];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("max_dimension") {
                max_dimension = Some(v.trim().parse::<usize>().map_err(|e| e.to_string())?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<u32> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        let [dim, degree, coeffs, ref initial @ ..] = fields[..] else {
            return Err(format!("line {}: too few fields", lineno + 1));
        };
        if dim as usize != directions.len() + 1 || initial.len() != degree as usize {
            return Err(format!("line {}: malformed row", lineno + 1));
        }
        directions.push(recurrence(degree as usize, coeffs, initial));
    }
    let max_dimension = max_dimension.ok_or("missing max_dimension header")?;
    if directions.len() != max_dimension {
        return Err(format!(
            "header announces {max_dimension} dimensions, table has {}",
            directions.len()
        ));
    }
    Ok(DirectionTable {
        max_dimension,
        directions,
    })
}

fn van_der_corput() -> [u32; BITS] {
    std::array::from_fn(|c| 1u32 << (BITS - 1 - c))
}

/// Direction numbers from a primitive polynomial of degree `s` with inner
/// coefficients packed in `a` and initial values `m_1..m_s`.
fn recurrence(s: usize, a: u32, m: &[u32]) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    for c in 0..s.min(BITS) {
        v[c] = m[c] << (BITS - 1 - c);
    }
    for c in s..BITS {
        let mut value = v[c - s] ^ (v[c - s] >> s);
        for k in 1..s {
            if (a >> (s - 1 - k)) & 1 == 1 {
                value ^= v[c - k];
            }
        }
        v[c] = value;
    }
    v
}

/// Points with sequence indices `1..=n` (the origin is skipped), row-major.
pub(crate) fn sobol_points(n: usize, d: usize) -> Result<Vec<f64>> {
    let table = table();
    if d > table.max_dimension {
        return Err(Error::SobolDimension {
            requested: d,
            max: table.max_dimension,
        });
    }
    if n as u64 >= 1u64 << BITS {
        return Err(crate::error::invalid(format!(
            "Sobol supports fewer than 2^{BITS} points, got {n}"
        )));
    }
    let scale = 1.0 / (1u64 << BITS) as f64;
    let mut state = vec![0u32; d];
    let mut out = Vec::with_capacity(n * d);
    for i in 1..=n {
        let bit = i.trailing_zeros() as usize;
        for (x, dirs) in state.iter_mut().zip(&table.directions) {
            *x ^= dirs[bit];
            out.push(*x as f64 * scale);
        }
    }
    Ok(out)
}
