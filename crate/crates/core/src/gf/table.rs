use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Environment variable naming a replacement modulus table file.
pub const MODULI_ENV: &str = "LINSETLAB_MODULI";

const DEFAULT_TABLE: &str = include_str!("../moduli.txt");

/// Moduli keyed by (p, n). One line per field: `p n c_0 c_1 ... c_n`, decimal,
/// coefficients low to high; `#` starts a comment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusTable {
    entries: BTreeMap<(u32, u32), Vec<u32>>,
}

impl ModulusTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| Error::ModulusTable { line: i + 1, reason };
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| err(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if nums.len() < 3 {
                return Err(err("expected `p n c_0 ... c_n`".into()));
            }
            let (p, n) = (nums[0], nums[1]);
            let coeffs = nums[2..].to_vec();
            if coeffs.len() != n as usize + 1 {
                return Err(err(format!("degree {n} needs {} coefficients, got {}", n + 1, coeffs.len())));
            }
            entries.insert((p, n), coeffs);
        }
        Ok(ModulusTable { entries })
    }

    pub fn builtin() -> Self {
        ModulusTable::parse(DEFAULT_TABLE).expect("built-in modulus table parses")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        ModulusTable::parse(&std::fs::read_to_string(path)?)
    }

    /// The table named by `LINSETLAB_MODULI`, or the built-in one.
    pub fn load() -> Result<Self> {
        match std::env::var_os(MODULI_ENV) {
            Some(path) => ModulusTable::from_file(Path::new(&path)),
            None => Ok(ModulusTable::builtin()),
        }
    }

    pub fn get(&self, p: u32, n: u32) -> Option<&[u32]> {
        self.entries.get(&(p, n)).map(Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &[u32])> {
        self.entries.iter().map(|(&(p, n), c)| (p, n, c.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_rejects_bad_arity() {
        let t = ModulusTable::parse("# header\n2 5 1 0 1 0 0 1  # F_32\n\n").unwrap();
        assert_eq!(t.get(2, 5), Some(&[1, 0, 1, 0, 0, 1][..]));
        assert!(matches!(ModulusTable::parse("3 5 1 2 0 1"), Err(Error::ModulusTable { line: 1, .. })));
        assert!(ModulusTable::parse("3 x 1").is_err());
    }

    #[test]
    fn builtin_has_the_tower_fields() {
        let t = ModulusTable::builtin();
        for (p, n) in [(2, 5), (3, 5), (5, 5), (2, 10)] {
            assert!(t.get(p, n).is_some(), "missing ({p},{n})");
        }
    }
}
