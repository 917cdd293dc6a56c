//! GRDF grid files and sweep CSV output.
//!
//! GRDF layout, little-endian: magic `GRDF`, `u32` version, `u8` d, `u64` n,
//! `f64` period, then `n^d` complex samples as `(re, im)` pairs, row-major.

use super::{GridFunction, SweepRow};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{Read, Write};

pub const GRDF_MAGIC: &[u8; 4] = b"GRDF";
pub const GRDF_VERSION: u32 = 1;

pub fn write_grdf<W: Write>(mut w: W, g: &GridFunction) -> Result<()> {
    w.write_all(GRDF_MAGIC)?;
    w.write_all(&GRDF_VERSION.to_le_bytes())?;
    w.write_all(&[g.d() as u8])?;
    w.write_all(&(g.n() as u64).to_le_bytes())?;
    w.write_all(&g.period().to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * g.len());
    for v in g.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

fn take<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b).map_err(|e| Error::Format(format!("truncated GRDF data: {e}")))?;
    Ok(b)
}

pub fn read_grdf<R: Read>(mut r: R) -> Result<GridFunction> {
    if &take::<4, _>(&mut r)? != GRDF_MAGIC {
        return Err(Error::Format("missing GRDF magic".into()));
    }
    let version = u32::from_le_bytes(take(&mut r)?);
    if version != GRDF_VERSION {
        return Err(Error::Format(format!("unsupported GRDF version {version}")));
    }
    let d = take::<1, _>(&mut r)?[0] as usize;
    let n = u64::from_le_bytes(take(&mut r)?);
    let period = f64::from_le_bytes(take(&mut r)?);
    let count = usize::try_from(n)
        .ok()
        .and_then(|n| (d <= 3).then(|| n.checked_pow(d as u32)).flatten())
        .filter(|&c| c <= 1 << 28)
        .ok_or_else(|| Error::Format(format!("implausible GRDF shape d={d}, n={n}")))?;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let re = f64::from_le_bytes(take(&mut r)?);
        let im = f64::from_le_bytes(take(&mut r)?);
        values.push(Complex64::new(re, im));
    }
    GridFunction::new(d, n as usize, period, values).map_err(|e| Error::Format(e.to_string()))
}

/// Sweep rows as CSV with columns `lambda,res_f,res_lap,ratio,omega_pred`.
/// Rows without a ratio carry their annotation in the ratio column.
pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let fmt = |e: csv::Error| Error::Io(e.to_string());
    out.write_record(["lambda", "res_f", "res_lap", "ratio", "omega_pred"]).map_err(fmt)?;
    for r in rows {
        let ratio = match (r.ratio, &r.note) {
            (Some(v), _) => format!("{v:e}"),
            (None, Some(note)) => note.clone(),
            (None, None) => String::new(),
        };
        out.write_record([
            format!("{}", r.lambda),
            format!("{:e}", r.res_f),
            format!("{:e}", r.res_lap),
            ratio,
            format!("{:e}", r.omega_pred),
        ])
        .map_err(fmt)?;
    }
    out.flush()?;
    Ok(())
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, rows)?;
    String::from_utf8(buf).map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::{omega_ratio_sweep, EIGEN_NOTE};
    use crate::parse_id;

    #[test]
    fn grdf_round_trip() {
        let g = GridFunction::plane_wave(3, 4, 2.5, &[1, -1, 2]).unwrap();
        let mut buf = Vec::new();
        write_grdf(&mut buf, &g).unwrap();
        assert_eq!(buf.len(), 4 + 4 + 1 + 8 + 8 + 16 * 64);
        assert_eq!(&buf[..4], b"GRDF");
        let back = read_grdf(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn grdf_rejects_garbage() {
        assert!(matches!(read_grdf(&b"NOPE"[..]), Err(Error::Format(_))));
        let g = GridFunction::zeros(1, 4, 1.0).unwrap();
        let mut buf = Vec::new();
        write_grdf(&mut buf, &g).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(matches!(read_grdf(buf.as_slice()), Err(Error::Format(_))));
        let mut bad = Vec::new();
        write_grdf(&mut bad, &g).unwrap();
        bad[4] = 9;
        assert!(matches!(read_grdf(bad.as_slice()), Err(Error::Format(_))));
    }

    #[test]
    fn sweep_csv_layout() {
        let f = parse_id("fractional:0.5").unwrap();
        let rows = omega_ratio_sweep(&f, &[4.0, 1.0], 2).unwrap();
        let text = sweep_csv(&rows).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda,res_f,res_lap,ratio,omega_pred");
        assert!(lines[1].starts_with("4,"));
        assert!(lines[2].contains(EIGEN_NOTE));
    }
}
