//! Binary field container and CSV slice export.
//!
//! Layout: magic "ANIF", format version u32, dimension u32, then per axis
//! (L as f64, N as u64), a certificate tag (0 none, 1 box, 2 ball) with its
//! payload, and the samples as interleaved little-endian (re, im) doubles in
//! row-major order.

use anilab_core::aniso::{AnisoBall, AnisoBox, AnisotropyVector};
use anilab_core::grid::{Grid, GridField, SupportCert};
use anilab_core::C64;
use anyhow::{bail, Context, Result};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"ANIF";
const VERSION: u32 = 1;

fn put_f64(out: &mut Vec<u8>, v: f64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn write_field(field: &GridField, path: &Path) -> Result<()> {
    let grid = field.grid();
    let mut out = Vec::with_capacity(64 + 16 * grid.len());
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, VERSION);
    put_u32(&mut out, grid.dim() as u32);
    for k in 0..grid.dim() {
        put_f64(&mut out, grid.half_period(k));
        put_u64(&mut out, grid.points(k) as u64);
    }
    match field.support_cert() {
        None => put_u32(&mut out, 0),
        Some(SupportCert::Box(b)) => {
            put_u32(&mut out, 1);
            for &hw in &b.halfwidths {
                put_f64(&mut out, hw);
            }
        }
        Some(SupportCert::Ball(a, ball)) => {
            put_u32(&mut out, 2);
            for &w in a.weights() {
                put_f64(&mut out, w);
            }
            for &c in &ball.center {
                put_f64(&mut out, c);
            }
            put_f64(&mut out, ball.radius);
        }
    }
    for v in field.values() {
        put_f64(&mut out, v.re);
        put_f64(&mut out, v.im);
    }
    let mut file =
        std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    file.write_all(&out)?;
    Ok(())
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            bail!("truncated field file");
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn read_field(path: &Path) -> Result<GridField> {
    let mut buf = Vec::new();
    std::fs::File::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .read_to_end(&mut buf)?;
    let mut cur = Cursor { buf: &buf, pos: 0 };
    if cur.take(4)? != MAGIC {
        bail!("not a field container (bad magic)");
    }
    let version = cur.u32()?;
    if version != VERSION {
        bail!("unsupported container version {version}");
    }
    let dim = cur.u32()? as usize;
    let mut dims = Vec::with_capacity(dim);
    for _ in 0..dim {
        let l = cur.f64()?;
        let n = cur.u64()? as usize;
        dims.push((l, n));
    }
    let grid = Grid::from_dims(&dims).map_err(|e| anyhow::anyhow!("{e}"))?;
    let cert = match cur.u32()? {
        0 => None,
        1 => {
            let mut hw = Vec::with_capacity(dim);
            for _ in 0..dim {
                hw.push(cur.f64()?);
            }
            Some(SupportCert::Box(
                AnisoBox::new(hw).map_err(|e| anyhow::anyhow!("{e}"))?,
            ))
        }
        2 => {
            let mut w = Vec::with_capacity(dim);
            for _ in 0..dim {
                w.push(cur.f64()?);
            }
            let mut c = Vec::with_capacity(dim);
            for _ in 0..dim {
                c.push(cur.f64()?);
            }
            let r = cur.f64()?;
            Some(SupportCert::Ball(
                AnisotropyVector::raw(w).map_err(|e| anyhow::anyhow!("{e}"))?,
                AnisoBall::new(c, r).map_err(|e| anyhow::anyhow!("{e}"))?,
            ))
        }
        t => bail!("unknown certificate tag {t}"),
    };
    let total = grid.len();
    let mut values = Vec::with_capacity(total);
    for _ in 0..total {
        let re = cur.f64()?;
        let im = cur.f64()?;
        values.push(C64::new(re, im));
    }
    Ok(GridField::from_values(grid, values)
        .map_err(|e| anyhow::anyhow!("{e}"))?
        .with_cert(cert))
}

/// CSV export of a 1-D or 2-D field slice: coordinates plus re/im columns.
pub fn field_csv(field: &GridField) -> Result<String> {
    let grid = field.grid();
    let mut out = String::new();
    match grid.dim() {
        1 => {
            out.push_str("x,re,im\n");
            for (i, v) in field.values().iter().enumerate() {
                out.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", grid.node(0, i), v.re, v.im));
            }
        }
        2 => {
            out.push_str("x1,x2,re,im\n");
            let n1 = grid.points(1);
            for (flat, v) in field.values().iter().enumerate() {
                let i0 = flat / n1;
                let i1 = flat % n1;
                out.push_str(&format!(
                    "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                    grid.node(0, i0),
                    grid.node(1, i1),
                    v.re,
                    v.im
                ));
            }
        }
        d => bail!("CSV export supports 1-D and 2-D fields, got {d}-D"),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use anilab_core::grid::sample;

    #[test]
    fn container_roundtrip() {
        let g = Grid::cubic(2, std::f64::consts::PI, 8).unwrap();
        let u = sample(&g, |x| C64::new(x[0] + 2.0 * x[1], x[0] * x[1]))
            .unwrap()
            .with_cert(Some(SupportCert::Ball(
                AnisotropyVector::raw(vec![1.0, 2.0]).unwrap(),
                AnisoBall::centered(2, 3.5).unwrap(),
            )));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.anif");
        write_field(&u, &path).unwrap();
        let back = read_field(&path).unwrap();
        assert_eq!(back.grid(), u.grid());
        assert_eq!(back.values(), u.values());
        assert_eq!(back.support_cert(), u.support_cert());
    }

    #[test]
    fn csv_has_rows() {
        let g = Grid::cubic(1, 1.0, 8).unwrap();
        let u = sample(&g, |x| C64::new(x[0], 0.0)).unwrap();
        let csv = field_csv(&u).unwrap();
        assert_eq!(csv.lines().count(), 9);
    }
}
