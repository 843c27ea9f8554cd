use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{Field, Fp2, Fp2Element, Poly, PolyRing};
use crate::error::{arg_err, Error, Result};

/// Degrees for which a classical modular polynomial ships with the crate.
pub const SHIPPED_ELLS: [u64; 6] = [2, 3, 5, 7, 11, 13];

const EMBEDDED: [&str; 6] = [
    include_str!("../../data/phi2.txt"),
    include_str!("../../data/phi3.txt"),
    include_str!("../../data/phi5.txt"),
    include_str!("../../data/phi7.txt"),
    include_str!("../../data/phi11.txt"),
    include_str!("../../data/phi13.txt"),
];

/// The classical modular polynomial `Phi_l(X, Y)` as a dense symmetric
/// coefficient matrix, `coeffs[dx][dy]` multiplying `X^dx Y^dy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularPoly {
    ell: u64,
    coeffs: Vec<Vec<BigInt>>,
}

impl ModularPoly {
    /// Parses the `dx dy c` format and runs the structural checks.
    pub fn parse(ell: u64, text: &str) -> Result<Self> {
        let n = ell as usize + 2;
        let mut entries: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::Data(format!("Phi_{ell}: malformed line {}: {line:?}", lineno + 1));
            let mut it = line.split_whitespace();
            let dx: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let dy: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let c: BigInt = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            if it.next().is_some() {
                return Err(bad());
            }
            if dx >= n || dy >= n {
                return Err(Error::Data(format!(
                    "Phi_{ell}: degree check failed, term X^{dx} Y^{dy} exceeds degree {}",
                    ell + 1
                )));
            }
            for key in [(dx, dy), (dy, dx)] {
                if let Some(old) = entries.get(&key) {
                    if *old != c {
                        return Err(Error::Data(format!(
                            "Phi_{ell}: symmetry check failed at X^{dx} Y^{dy}"
                        )));
                    }
                }
                entries.insert(key, c.clone());
            }
        }
        let mut coeffs = vec![vec![BigInt::zero(); n]; n];
        for ((dx, dy), c) in entries {
            coeffs[dx][dy] = c;
        }
        let phi = ModularPoly { ell, coeffs };
        phi.validate()?;
        Ok(phi)
    }

    pub fn from_file(ell: u64, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(ell, &text)
    }

    /// Checks symmetry, exact degree `l + 1` and the Kronecker congruence
    /// `Phi_l = (X^l - Y)(X - Y^l) mod l`.
    pub fn validate(&self) -> Result<()> {
        let l = self.ell;
        let n = l as usize + 2;
        if self.coeffs.len() != n || self.coeffs.iter().any(|r| r.len() != n) {
            return Err(Error::Data(format!("Phi_{l}: degree check failed, wrong shape")));
        }
        for dx in 0..n {
            for dy in 0..dx {
                if self.coeffs[dx][dy] != self.coeffs[dy][dx] {
                    return Err(Error::Data(format!(
                        "Phi_{l}: symmetry check failed at X^{dx} Y^{dy}"
                    )));
                }
            }
        }
        if !self.coeffs[n - 1][0].is_one() {
            return Err(Error::Data(format!(
                "Phi_{l}: degree check failed, X^{} has coefficient {}",
                n - 1,
                self.coeffs[n - 1][0]
            )));
        }
        if (1..n).any(|dy| !self.coeffs[n - 1][dy].is_zero()) {
            return Err(Error::Data(format!(
                "Phi_{l}: degree check failed, X^{} has a Y-dependent coefficient",
                n - 1
            )));
        }
        let li = BigInt::from(l);
        let lu = l as usize;
        for dx in 0..n {
            for dy in 0..n {
                let expected: i64 = match (dx, dy) {
                    (a, 0) | (0, a) if a == lu + 1 => 1,
                    (a, b) if a == lu && b == lu => -1,
                    (1, 1) => -1,
                    _ => 0,
                };
                if !(&self.coeffs[dx][dy] - expected).is_multiple_of(&li) {
                    return Err(Error::Data(format!(
                        "Phi_{l}: Kronecker congruence fails mod {l} at X^{dx} Y^{dy}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn coeff(&self, dx: usize, dy: usize) -> &BigInt {
        &self.coeffs[dx][dy]
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce(&self, m: u64) -> Vec<Vec<u64>> {
        let mb = BigInt::from(m);
        self.coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.mod_floor(&mb).to_u64().expect("residue fits"))
                    .collect()
            })
            .collect()
    }

    /// `Phi_l(j, Y)` over F_{p^2}.
    pub fn specialize(&self, field: &Fp2, j: &Fp2Element) -> Poly<Fp2Element> {
        let red = self.reduce(field.characteristic());
        specialize_reduced(&red, field, j)
    }

    /// `Phi_l(x, y)` evaluated over F_{p^2}.
    pub fn eval(&self, field: &Fp2, x: &Fp2Element, y: &Fp2Element) -> Fp2Element {
        let ring = PolyRing::new(*field);
        ring.eval(&self.specialize(field, x), y)
    }
}

pub(crate) fn specialize_reduced(red: &[Vec<u64>], field: &Fp2, j: &Fp2Element) -> Poly<Fp2Element> {
    let n = red.len();
    let mut powers = Vec::with_capacity(n);
    let mut acc = field.one();
    for _ in 0..n {
        powers.push(acc);
        acc = field.mul(&acc, j);
    }
    let coeffs = (0..n)
        .map(|dy| {
            (0..n).fold(field.zero(), |s, dx| {
                let c = red[dx][dy];
                if c == 0 {
                    s
                } else {
                    field.add(&s, &field.mul(&field.embed(c), &powers[dx]))
                }
            })
        })
        .collect();
    PolyRing::new(*field).from_coeffs(coeffs)
}

/// The shipped `Phi_l`, parsed and validated once per process.
pub fn load_modular_poly(ell: u64) -> Result<&'static ModularPoly> {
    static LOADED: [OnceLock<std::result::Result<ModularPoly, String>>; 6] =
        [const { OnceLock::new() }; 6];
    let Some(idx) = SHIPPED_ELLS.iter().position(|&l| l == ell) else {
        return arg_err(format!(
            "no modular polynomial shipped for l = {ell} (available: 2, 3, 5, 7, 11, 13)"
        ));
    };
    LOADED[idx]
        .get_or_init(|| ModularPoly::parse(ell, EMBEDDED[idx]).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Data(e.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_polynomials_validate() {
        for l in SHIPPED_ELLS {
            let phi = load_modular_poly(l).unwrap();
            assert_eq!(phi.coeffs.len() as u64, l + 2);
        }
        assert!(load_modular_poly(17).is_err());
    }

    #[test]
    fn phi2_known_coefficients() {
        let phi = load_modular_poly(2).unwrap();
        assert_eq!(*phi.coeff(2, 1), BigInt::from(1488));
        assert_eq!(*phi.coeff(1, 2), BigInt::from(1488));
        assert_eq!(*phi.coeff(2, 2), BigInt::from(-1));
        assert_eq!(*phi.coeff(0, 0), "-157464000000000".parse::<BigInt>().unwrap());
    }

    #[test]
    fn kronecker_by_hand_for_5() {
        let phi = load_modular_poly(5).unwrap();
        let five = BigInt::from(5);
        for dx in 0..7 {
            for dy in 0..7 {
                let r = phi.coeff(dx, dy).mod_floor(&five);
                let want = match (dx, dy) {
                    (6, 0) | (0, 6) => 1,
                    (5, 5) | (1, 1) => 4,
                    _ => 0,
                };
                assert_eq!(r, BigInt::from(want), "X^{dx} Y^{dy}");
            }
        }
    }

    #[test]
    fn corrupt_data_names_the_failing_check() {
        let text = EMBEDDED[0];
        let asym = format!("{text}1 2 7\n");
        let e = ModularPoly::parse(2, &asym).unwrap_err().to_string();
        assert!(e.contains("symmetry"), "{e}");

        let high = format!("{text}4 0 1\n");
        let e = ModularPoly::parse(2, &high).unwrap_err().to_string();
        assert!(e.contains("degree"), "{e}");

        let kron = text.replace("2 1 1488", "2 1 1489");
        let e = ModularPoly::parse(2, &kron).unwrap_err().to_string();
        assert!(e.contains("Kronecker"), "{e}");

        let junk = format!("{text}1 x 3\n");
        assert!(matches!(ModularPoly::parse(2, &junk), Err(Error::Data(_))));
    }

    #[test]
    fn from_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("phi3.txt");
        std::fs::write(&path, EMBEDDED[1]).unwrap();
        assert_eq!(ModularPoly::from_file(3, &path).unwrap(), *load_modular_poly(3).unwrap());
        assert!(ModularPoly::from_file(3, &dir.path().join("missing.txt")).is_err());
    }
}
