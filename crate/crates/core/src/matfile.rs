//! Debug dump of complex matrices: 16-byte header (rows, cols as u64 LE)
//! followed by row-major interleaved re/im f64 LE.

use std::io::{self, Read, Write};

use num_complex::Complex64;

use crate::linalg::{cmat_zeros, CMat};

pub fn write_matrix<W: Write>(w: &mut W, m: &CMat) -> io::Result<()> {
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_all(&m[(i, j)].re.to_le_bytes())?;
            w.write_all(&m[(i, j)].im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_matrix<R: Read>(r: &mut R) -> io::Result<CMat> {
    let mut hdr = [0u8; 16];
    r.read_exact(&mut hdr)?;
    let rows = u64::from_le_bytes(hdr[0..8].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(hdr[8..16].try_into().unwrap()) as usize;
    if rows.saturating_mul(cols) > (1 << 28) {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "matrix header too large",
        ));
    }
    let mut m = cmat_zeros(rows, cols);
    let mut buf = [0u8; 16];
    for i in 0..rows {
        for j in 0..cols {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[0..8].try_into().unwrap());
            let im = f64::from_le_bytes(buf[8..16].try_into().unwrap());
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let m = CMat::from_fn(3, 2, |i, j| Complex64::new(i as f64 + 0.25, -(j as f64)));
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m).unwrap();
        assert_eq!(buf.len(), 16 + 3 * 2 * 16);
        let back = read_matrix(&mut buf.as_slice()).unwrap();
        assert_eq!(m, back);
    }
}
