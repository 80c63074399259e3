//! CSV dumps of kernels, eigenfunctions and phase-space maps for plotting.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::genfun::{transform_point, GeneratingFunction, SplitGeneratingFunction};
use crate::grouplaw::{linear_gf, quadratic_gf};
use crate::phasecore::{Params, PhasePoint, PotentialFamily};
use crate::specfun::{EigenState, Eigenfunction};
use crate::verify::linspace;

/// A tabulated dump: header plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Grid points where the quantity was not defined.
    pub skipped: usize,
}

/// How a family member is selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Member {
    Theta(f64),
    Nu(f64),
    Mu(Complex64),
}

/// Generating function for `family` at `member`.
pub fn member_gf(family: PotentialFamily, member: Member, params: &Params) -> Result<SplitGeneratingFunction> {
    match (family, member) {
        (PotentialFamily::Quadratic, Member::Theta(t)) => quadratic_gf(t, params),
        (PotentialFamily::Linear, Member::Nu(nu)) => linear_gf(nu, params),
        (_, Member::Mu(mu)) => SplitGeneratingFunction::new(family, mu, *params),
        (f, m) => Err(Error::InvalidParams(format!("{m:?} does not select a member of the {f} family"))),
    }
}

fn check_grid(n: usize, lo: f64, hi: f64) -> Result<()> {
    if n == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParams(format!("grid needs n > 0 and lo < hi (n = {n}, [{lo}, {hi}])")));
    }
    Ok(())
}

/// `e^{iF(q,Q)/ħ}` on an `n × n` grid over `[lo, hi]²`, `q` slowest.
pub fn kernel_table(gf: &SplitGeneratingFunction, n: usize, lo: f64, hi: f64) -> Result<Table> {
    check_grid(n, lo, hi)?;
    let hbar = gf.params().hbar;
    let grid = linspace(lo, hi, n);
    let mut rows = Vec::with_capacity(n * n);
    for &q in &grid {
        for &big_q in &grid {
            let k = (Complex64::i() * gf.value(q, big_q) / hbar).exp();
            rows.push(vec![q, big_q, k.re, k.im]);
        }
    }
    Ok(Table { header: vec!["q", "Q", "Re", "Im"], rows, skipped: 0 })
}

/// `ψ(q)` at `n` points of `[lo, hi]`.
pub fn eigenfunction_table(state: EigenState, params: &Params, n: usize, lo: f64, hi: f64) -> Result<Table> {
    check_grid(n, lo, hi)?;
    let psi = Eigenfunction::new(state, params)?;
    let rows = linspace(lo, hi, n).into_iter().map(|q| vec![q, psi.eval(q)]).collect();
    Ok(Table { header: vec!["q", "value"], rows, skipped: 0 })
}

/// Images `(Q, P)` of an `n × n` grid of `(q, p)` over `[lo, hi]²`. Points
/// without a unique image are left out and counted.
pub fn phase_map_table(gf: &SplitGeneratingFunction, n: usize, lo: f64, hi: f64) -> Result<Table> {
    check_grid(n, lo, hi)?;
    let grid = linspace(lo, hi, n);
    let mut rows = Vec::with_capacity(n * n);
    let mut skipped = 0;
    for &q in &grid {
        for &p in &grid {
            match transform_point(gf, PhasePoint::new(q, p)) {
                Ok(img) => rows.push(vec![q, p, img.q, img.p]),
                Err(Error::NoRoot) | Err(Error::BranchAmbiguity { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Table { header: vec!["q", "p", "Q", "P"], rows, skipped })
}

/// Write `table` as CSV with a header row and `\n` line endings.
pub fn write_csv(table: &Table, mut out: impl Write) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// [`write_csv`] to a file; IO errors carry the path.
pub fn write_csv_file(table: &Table, path: &Path) -> std::result::Result<(), String> {
    let file = std::fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut buf = std::io::BufWriter::new(file);
    write_csv(table, &mut buf).map_err(|e| format!("{}: {e}", path.display()))?;
    buf.flush().map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasecore::eval_hamiltonian;

    #[test]
    fn kernel_has_one_row_per_grid_point() {
        let p = Params::default();
        let gf = member_gf(PotentialFamily::Quadratic, Member::Theta(std::f64::consts::FRAC_PI_2), &p).unwrap();
        let t = kernel_table(&gf, 50, -3.0, 3.0).unwrap();
        let mut out = Vec::new();
        write_csv(&t, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 2501);
        assert!(text.starts_with("q,Q,Re,Im\n"));
        assert!(!text.contains('\r'));
        // unimodular kernel
        assert!(t.rows.iter().all(|r| (r[2].hypot(r[3]) - 1.0).abs() < 1e-12));
    }

    #[test]
    fn airy_dump_decays_on_the_classically_forbidden_side() {
        let p = Params::default();
        let gamma = 2.0f64.cbrt();
        let t = eigenfunction_table(EigenState::Linear { energy: 0.0 }, &p, 141, -10.0 / gamma, 4.0 / gamma).unwrap();
        let right: Vec<f64> = t.rows.iter().filter(|r| r[0] > 0.0).map(|r| r[1]).collect();
        assert!(right.len() > 30);
        assert!(right.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
    }

    #[test]
    fn sinusoidal_phase_map_conserves_energy() {
        let p = Params::default();
        let gf = member_gf(PotentialFamily::Sinusoidal, Member::Mu(Complex64::new(3.0, 0.0)), &p).unwrap();
        let t = phase_map_table(&gf, 12, -1.0, 1.0).unwrap();
        assert_eq!(t.rows.len() + t.skipped, 144, "{}", t.skipped);
        // at fixed μ the sinusoidal map covers only a bounded band of momenta
        assert!(t.rows.len() > 60, "{}", t.rows.len());
        for r in &t.rows {
            let h0 = eval_hamiltonian(PotentialFamily::Sinusoidal, &p, PhasePoint::new(r[0], r[1]));
            let h1 = eval_hamiltonian(PotentialFamily::Sinusoidal, &p, PhasePoint::new(r[2], r[3]));
            assert!((h0 - h1).abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn rejects_empty_grid_and_mismatched_member() {
        let p = Params::default();
        let gf = SplitGeneratingFunction::real(PotentialFamily::Linear, 1.0, p).unwrap();
        assert!(kernel_table(&gf, 0, -1.0, 1.0).is_err());
        assert!(member_gf(PotentialFamily::Sinusoidal, Member::Theta(1.0), &p).is_err());
    }
}
