//! Touchstone v1 and CSV export of swept S-parameters.

use super::{NetworkError, PortResponse};
use std::fmt::Write as _;

/// Renders a Touchstone v1 file body (`# Hz S RI R <z0>`).
///
/// Follows the v1 conventions: a 2-port is written in column-major order
/// (S11 S21 S12 S22) on one line per frequency; larger networks are written
/// row-major with one matrix row per line. All ports must share a reference
/// impedance.
pub fn write_touchstone(response: &PortResponse) -> Result<String, NetworkError> {
    let n = response.port_count();
    if n == 0 || response.s.is_empty() {
        return Err(NetworkError::InsufficientData);
    }
    let z0 = response.z_refs[0];
    if response.z_refs.iter().any(|&z| (z - z0).abs() > 1e-9) {
        return Err(NetworkError::InvalidNetlist(
            "touchstone export requires a uniform port reference impedance".into(),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(out, "! {n}-port S-parameter data");
    let _ = writeln!(out, "# Hz S RI R {z0}");
    for (f, s) in response.frequencies.iter().zip(&response.s) {
        match n {
            1 => {
                let _ = writeln!(out, "{f:.6e} {:.9e} {:.9e}", s[(0, 0)].re, s[(0, 0)].im);
            }
            2 => {
                let _ = writeln!(
                    out,
                    "{f:.6e} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e}",
                    s[(0, 0)].re,
                    s[(0, 0)].im,
                    s[(1, 0)].re,
                    s[(1, 0)].im,
                    s[(0, 1)].re,
                    s[(0, 1)].im,
                    s[(1, 1)].re,
                    s[(1, 1)].im,
                );
            }
            _ => {
                let _ = write!(out, "{f:.6e}");
                for row in 0..n {
                    if row > 0 {
                        let _ = write!(out, "         ");
                    }
                    for col in 0..n {
                        let _ = write!(out, " {:.9e} {:.9e}", s[(row, col)].re, s[(row, col)].im);
                    }
                    let _ = writeln!(out);
                }
            }
        }
    }
    Ok(out)
}

/// Renders swept S-parameters as CSV: `freq_hz` followed by `s{i}{j}_re`,
/// `s{i}{j}_im` columns in row-major order (1-indexed ports).
pub fn write_touchstone_csv(response: &PortResponse) -> Result<String, NetworkError> {
    let n = response.port_count();
    if n == 0 || response.s.is_empty() {
        return Err(NetworkError::InsufficientData);
    }
    let mut out = String::from("freq_hz");
    for i in 1..=n {
        for j in 1..=n {
            let _ = write!(out, ",s{i}{j}_re,s{i}{j}_im");
        }
    }
    out.push('\n');
    for (f, s) in response.frequencies.iter().zip(&response.s) {
        let _ = write!(out, "{f:.6e}");
        for i in 0..n {
            for j in 0..n {
                let _ = write!(out, ",{:.9e},{:.9e}", s[(i, j)].re, s[(i, j)].im);
            }
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn two_port_fixture() -> PortResponse {
        let s = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.1, -0.2),
                Complex64::new(0.9, 0.0),
                Complex64::new(0.9, 0.0),
                Complex64::new(0.1, 0.2),
            ],
        );
        PortResponse {
            frequencies: vec![1e9],
            z_refs: vec![50.0, 50.0],
            s: vec![s],
            y_in: None,
        }
    }

    #[test]
    fn touchstone_header_and_ordering() {
        let text = write_touchstone(&two_port_fixture()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "! 2-port S-parameter data");
        assert_eq!(lines.next().unwrap(), "# Hz S RI R 50");
        let data = lines.next().unwrap();
        let fields: Vec<&str> = data.split_whitespace().collect();
        assert_eq!(fields.len(), 9);
        // column-major: S11 S21 S12 S22
        assert!(fields[1].starts_with("1.0"));
        assert!(fields[3].starts_with("9.0"));
    }

    #[test]
    fn csv_header_is_row_major() {
        let text = write_touchstone_csv(&two_port_fixture()).unwrap();
        assert!(text.starts_with(
            "freq_hz,s11_re,s11_im,s12_re,s12_im,s21_re,s21_im,s22_re,s22_im\n"
        ));
    }

    #[test]
    fn mixed_references_are_rejected() {
        let mut resp = two_port_fixture();
        resp.z_refs[1] = 75.0;
        assert!(write_touchstone(&resp).is_err());
    }
}
