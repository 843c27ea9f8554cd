use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use super::{hilbert_class_poly, ClassPolynomial};
use crate::arith::Poly;
use crate::error::{Error, Result};

/// Memoizes class polynomials in memory and, optionally, as files
/// `H_<|D|>.txt` under a directory.
#[derive(Debug, Default)]
pub struct HilbertCache {
    dir: Option<PathBuf>,
    mem: Mutex<HashMap<i64, Arc<ClassPolynomial>>>,
}

impl HilbertCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        HilbertCache {
            dir: Some(dir.into()),
            mem: Mutex::default(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn file_name(d: i64) -> String {
        format!("H_{}.txt", -d)
    }

    pub fn get(&self, d: i64) -> Result<Arc<ClassPolynomial>> {
        if let Some(h) = self.mem.lock().unwrap().get(&d) {
            return Ok(h.clone());
        }
        let h = match self.read_file(d)? {
            Some(h) => h,
            None => {
                let h = hilbert_class_poly(d)?;
                self.write_file(&h)?;
                h
            }
        };
        let h = Arc::new(h);
        self.mem.lock().unwrap().insert(d, h.clone());
        Ok(h)
    }

    pub fn get_mod(&self, d: i64, m: u64) -> Result<Poly<u64>> {
        self.get(d)?.reduce_mod(m)
    }

    fn read_file(&self, d: i64) -> Result<Option<ClassPolynomial>> {
        let Some(dir) = &self.dir else {
            return Ok(None);
        };
        let path = dir.join(Self::file_name(d));
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        parse(&text, d)
            .map(Some)
            .ok_or_else(|| Error::Data(format!("corrupt cache file {}", path.display())))
    }

    fn write_file(&self, h: &ClassPolynomial) -> Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let name = Self::file_name(h.discriminant);
        let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(render(h).as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, dir.join(name))?;
        Ok(())
    }
}

/// The cache file body: a header line and one coefficient per line.
pub fn render(h: &ClassPolynomial) -> String {
    let mut s = format!("D={} h={}\n", h.discriminant, h.degree());
    for c in &h.coefficients {
        s.push_str(&c.to_string());
        s.push('\n');
    }
    s
}

fn parse(text: &str, d: i64) -> Option<ClassPolynomial> {
    let mut lines = text.split('\n');
    let header = lines.next()?;
    let (dpart, hpart) = header.split_once(' ')?;
    let dd: i64 = dpart.strip_prefix("D=")?.parse().ok()?;
    let h: usize = hpart.strip_prefix("h=")?.parse().ok()?;
    if dd != d {
        return None;
    }
    let coefficients: Vec<BigInt> = lines
        .take(h + 1)
        .map(|l| l.parse().ok())
        .collect::<Option<_>>()?;
    if coefficients.len() != h + 1 || coefficients[h] != BigInt::from(1) {
        return None;
    }
    let out = ClassPolynomial {
        discriminant: d,
        coefficients,
    };
    (render(&out) == text).then_some(out)
}
