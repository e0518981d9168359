//! Property suites behind `nctheta verify <kind>`.

use clap::ValueEnum;
use nctheta_core::error::{Error, Result};
use nctheta_core::heisenberg::{
    cube_samples, curvature_check, dbar_kernel_check, tmap_product_check, leibniz_check, random_element,
    twisted_product_check, ResidualReport, COMMUTATOR_STEP, DEFAULT_STEP,
};
use nctheta_core::linalg::{coset_representatives, difference, is_positive_definite, IntSymMatrix, SkewMatrix};
use nctheta_core::mirror::mirror_tensor;
use nctheta_core::star::star_engine_check;
use nctheta_core::structure::{
    check_associativity_chain, polydisc_samples, structure_tensor, verify_addition, AssociativityStatus, LabelTriple,
};
use nctheta_core::theta::{e_comm, e_comm_via_theta};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::exactly_three;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Addition,
    Star,
    Mirror,
    Poisson,
    #[value(name = "lemma23")]
    TmapProduct,
    Dbar,
    Associativity,
    Leibniz,
    Curvature,
    Twisted,
}

pub struct Options {
    pub labels: Vec<IntSymMatrix>,
    pub theta: SkewMatrix,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

impl Options {
    fn dim(&self) -> usize {
        self.labels.first().map(IntSymMatrix::dim).unwrap_or(0)
    }

    fn triple(&self) -> Result<[IntSymMatrix; 3]> {
        exactly_three(self.labels.clone())
    }

    fn label_triple(&self, theta: SkewMatrix) -> Result<LabelTriple> {
        let [a, b, c] = self.triple()?;
        LabelTriple::new(a, b, c, theta)
    }

    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Ordered pairs `(i, j)`, `i < j`, of labels with positive definite difference.
    fn positive_pairs(&self) -> Result<Vec<(IntSymMatrix, IntSymMatrix)>> {
        let mut out = Vec::new();
        for (i, a) in self.labels.iter().enumerate() {
            for b in &self.labels[i + 1..] {
                if is_positive_definite(&difference(a, b)?) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        if out.is_empty() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(out)
    }
}

fn residual(report: &ResidualReport) -> Value {
    report.to_json()
}

/// Run one suite; returns the pass flag and the JSON report.
pub fn run(kind: Kind, opts: &Options) -> Result<(bool, Value)> {
    match kind {
        Kind::Addition => {
            let default = if opts.dim() == 1 { 1e-9 } else { 1e-8 };
            let r = verify_addition(&opts.label_triple(opts.theta.clone())?, opts.samples(20), opts.seed, opts.tol(default))?;
            Ok((r.pass, r.to_json()))
        }
        Kind::Star => {
            let engine = star_engine_check(&opts.theta, opts.samples(10), 25, 80, opts.seed, opts.tol(1e-9), 1e-12)?;
            let formula = verify_addition(&opts.label_triple(opts.theta.clone())?, opts.samples(10), opts.seed, opts.tol(1e-8))?;
            let pass = engine.pass && formula.pass;
            Ok((pass, json!({"engine": engine.to_json(), "product_formula": formula.to_json(), "pass": pass})))
        }
        Kind::Mirror => {
            let tol = opts.tol(1e-10);
            let triple = opts.label_triple(SkewMatrix::zero(opts.dim()))?;
            let algebraic = structure_tensor(&triple, 1e-15)?;
            let mirror = mirror_tensor(&triple, 1e-15)?;
            let mut worst: f64 = 0.0;
            for (x, y) in algebraic.values().iter().zip(mirror.values()) {
                let err = if x.norm() > 0.0 { (x - y).norm() / x.norm() } else { (x - y).norm() };
                worst = worst.max(err);
            }
            let pass = worst <= tol;
            Ok((pass, json!({"entries": algebraic.values().len(), "max_rel_error": worst, "tol": tol, "pass": pass})))
        }
        Kind::Poisson => {
            let tol = opts.tol(1e-10);
            let points = polydisc_samples(opts.dim(), opts.samples(20), opts.seed);
            let mut worst: f64 = 0.0;
            let mut checks = 0;
            for (a, b) in opts.positive_pairs()? {
                for mu in coset_representatives(&difference(&a, &b)?)? {
                    for z in &points {
                        let g = e_comm(&a, &b, &mu, z, 1e-14)?.value;
                        let t = e_comm_via_theta(&a, &b, &mu, z, 1e-14)?.value;
                        worst = worst.max((g - t).norm() / g.norm().max(1.0));
                        checks += 1;
                    }
                }
            }
            let pass = worst <= tol;
            Ok((pass, json!({"checks": checks, "max_error": worst, "tol": tol, "pass": pass})))
        }
        Kind::TmapProduct => {
            let [a, b, c] = opts.triple()?;
            let r = tmap_product_check(&a, &b, &c, 10, opts.samples(20), opts.seed, opts.tol(1e-9))?;
            Ok((r.pass, residual(&r)))
        }
        Kind::Dbar => {
            let tol = opts.tol(1e-6);
            let mut worst: f64 = 0.0;
            let mut checks = 0;
            for (a, b) in opts.positive_pairs()? {
                for mu in coset_representatives(&difference(&a, &b)?)? {
                    let r = dbar_kernel_check(&a, &b, &mu, opts.samples(20), DEFAULT_STEP, tol, opts.seed)?;
                    worst = worst.max(r.max_error);
                    checks += r.checks;
                }
            }
            let pass = worst <= tol;
            Ok((pass, json!({"checks": checks, "max_error": worst, "tol": tol, "pass": pass})))
        }
        Kind::Associativity => {
            let default = if opts.dim() == 1 { 1e-9 } else { 1e-8 };
            let r = check_associativity_chain(&opts.labels, &opts.theta, opts.tol(default))?;
            Ok((r.status != AssociativityStatus::Fail, r.to_json()))
        }
        Kind::Leibniz => {
            let [a, b, c] = opts.triple()?;
            let tol = opts.tol(1e-5);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut worst: f64 = 0.0;
            let mut checks = 0;
            for i in 0..5 {
                let xi = random_element(&difference(&a, &b)?, 2, &mut rng)?;
                let eta = random_element(&difference(&b, &c)?, 2, &mut rng)?;
                let points = cube_samples(a.dim(), opts.samples(3), opts.seed + i);
                let r = leibniz_check(&xi, &eta, &a, &b, &c, &points, DEFAULT_STEP, tol)?;
                worst = worst.max(r.max_error);
                checks += r.checks;
            }
            let pass = worst <= tol;
            Ok((pass, json!({"pairs": 5, "checks": checks, "max_error": worst, "tol": tol, "pass": pass})))
        }
        Kind::Curvature => {
            let tol = opts.tol(1e-5);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut worst: f64 = 0.0;
            let mut checks = 0;
            for (a, b) in opts.positive_pairs()? {
                let modulus = difference(&a, &b)?;
                for i in 0..5 {
                    let xi = random_element(&modulus, 2, &mut rng)?;
                    let points = cube_samples(modulus.dim(), opts.samples(10), opts.seed + i);
                    let r = curvature_check(&xi, &points, COMMUTATOR_STEP, tol)?;
                    worst = worst.max(r.max_error);
                    checks += r.checks;
                }
            }
            let pass = worst <= tol;
            Ok((pass, json!({"checks": checks, "max_error": worst, "tol": tol, "pass": pass})))
        }
        Kind::Twisted => {
            let [a, b, c] = opts.triple()?;
            let tol = opts.tol(1e-9);
            let n = a.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut worst: f64 = 0.0;
            let mut checks = 0;
            for i in 0..5 {
                let xi = random_element(&difference(&a, &b)?, 2, &mut rng)?;
                let eta = random_element(&difference(&b, &c)?, 2, &mut rng)?;
                let points: Vec<(Vec<f64>, Vec<f64>)> = cube_samples(2 * n, opts.samples(20), opts.seed + i)
                    .into_iter()
                    .map(|p| (p[..n].to_vec(), p[n..].to_vec()))
                    .collect();
                let r = twisted_product_check(&xi, &eta, &a, &b, &c, &points, tol)?;
                worst = worst.max(r.max_error);
                checks += r.checks;
            }
            let pass = worst <= tol;
            Ok((pass, json!({"pairs": 5, "checks": checks, "max_error": worst, "tol": tol, "pass": pass})))
        }
    }
}
