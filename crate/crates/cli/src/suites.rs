//! Verification suites behind `verify --suite <name>`.
//!
//! Every suite runs over the configured primes and seed and produces one
//! deterministic report: the same configuration yields byte-identical
//! output (no timestamps, no durations, stable ordering).

use rayon::prelude::*;
use serde::Serialize;

use e756::forms::{
    build_f, build_h, f_table_in_ring, pullback_f_token, FTable, FourLinearForm, SymplecticForm,
};
use e756::matrix::Matrix;
use e756::quadrics::{build_basis, QuadricBasis, Reducer};
use e756::rep56::{
    apply_word, evaluate_word, random_word, torus_weight, Lcg, Token, DIM,
};
use e756::ring::{Field, PrimeField, RatField, Ring};
use e756::stabilizer::{lie_dim_fh, lie_dim_gi, membership_forms, membership_gi};
use e756::ChevalleyBasis;

pub const BUILD_ID: &str = concat!("e756 ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug)]
pub struct Config {
    pub primes: Vec<u64>,
    pub seed: u64,
    pub word_length: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            primes: vec![2, 3, 5, 7, 11, 13],
            seed: 17,
            word_length: 10,
        }
    }
}

/// All immutable tables, built once per process.
pub struct Tables {
    pub cb: ChevalleyBasis,
    pub basis: QuadricBasis,
    pub h: SymplecticForm,
    pub f4: FourLinearForm,
}

impl Tables {
    pub fn new(primes: &[u64]) -> Self {
        let cb = ChevalleyBasis::new();
        let basis = build_basis(&cb, primes);
        let h = build_h(&cb);
        let f4 = build_f(&cb);
        Tables { cb, basis, h, f4 }
    }
}

#[derive(Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub build: String,
    pub suite: String,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub word_length: usize,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn assemble(suite: &str, cfg: &Config, checks: Vec<Check>) -> Self {
        SuiteReport {
            build: BUILD_ID.to_string(),
            suite: suite.to_string(),
            primes: cfg.primes.clone(),
            seed: cfg.seed,
            word_length: cfg.word_length,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {} | suite {} | primes {:?} | seed {}\n",
            self.build, self.suite, self.primes, self.seed
        ));
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} — {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!(
            "{}: {} checks\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out
    }
}

/// Span stability of all 133 generators under `x_γ(ξ)` for every E7 root
/// and `ξ ∈ {1, -1, 2, 3}`, over the integers.
pub fn suite_invariance(t: &Tables, cfg: &Config) -> SuiteReport {
    let reducer = Reducer::new(&t.cb, &t.basis, RatField);
    let roots: Vec<_> = t.cb.roots().e7_roots().collect();
    let checks: Vec<Check> = roots
        .par_iter()
        .map(|gamma| {
            for xi in [1i64, -1, 2, 3] {
                if let Err(e) =
                    e756::quadrics::verify_span_stability(&t.cb, &t.basis, &reducer, gamma, xi)
                {
                    return Check::new(format!("invariance γ={:?}", gamma.0), false, e.what);
                }
            }
            Check::new(
                format!("invariance γ={:?}", gamma.0),
                true,
                "pullbacks of all 133 generators reduce to zero for ξ in {1,-1,2,3}",
            )
        })
        .collect();
    SuiteReport::assemble("invariance", cfg, checks)
}

/// The closed-form identities of both generator families, all five cases,
/// coefficient-exact.
pub fn suite_identities(t: &Tables, cfg: &Config) -> SuiteReport {
    let roots: Vec<_> = t.cb.roots().e7_roots().collect();
    let checks: Vec<Check> = roots
        .par_iter()
        .map(|gamma| {
            for xi in [1i64, -1, 2, 3] {
                if let Err(e) = e756::quadrics::verify_identities(&t.cb, gamma, xi) {
                    return Check::new(format!("identities γ={:?}", gamma.0), false, e.what);
                }
            }
            Check::new(
                format!("identities γ={:?}", gamma.0),
                true,
                "all five pairing cases for both families hold exactly",
            )
        })
        .collect();
    SuiteReport::assemble("identities", cfg, checks)
}

/// Kernel dimensions of the three stabilizer Lie algebras over the
/// rationals and every configured prime.
pub fn suite_lie_dims(t: &Tables, cfg: &Config) -> SuiteReport {
    enum AnyField {
        Q(RatField),
        P(PrimeField),
    }
    let mut rings: Vec<AnyField> = vec![AnyField::Q(RatField)];
    rings.extend(cfg.primes.iter().map(|&p| AnyField::P(PrimeField::new(p))));

    let checks: Vec<Check> = rings
        .par_iter()
        .flat_map(|ring| {
            fn dims<R: Field>(t: &Tables, ring: &R) -> [e756::stabilizer::LieSolveReport; 3]
            where
                R::Elem: Ord,
            {
                [
                    lie_dim_gi(&t.cb, &t.basis, ring, false),
                    lie_dim_fh(&t.cb, &t.f4, &t.h, ring, false, false),
                    lie_dim_fh(&t.cb, &t.f4, &t.h, ring, true, false),
                ]
            }
            let reports = match ring {
                AnyField::Q(q) => dims(t, q),
                AnyField::P(p) => dims(t, p),
            };
            let expected = [134usize, 133, 134];
            let names = ["ideal stabilizer", "form stabilizer", "form similarity"];
            reports
                .into_iter()
                .zip(expected)
                .zip(names)
                .map(|((rep, want), label)| {
                    Check::new(
                        format!("lie-dim {} over {}", label, rep.ring),
                        rep.kernel_dim == want,
                        format!(
                            "kernel {} of {} unknowns (rank {}), expected {}",
                            rep.kernel_dim, rep.unknowns, rep.rank, want
                        ),
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();
    SuiteReport::assemble("lie-dims", cfg, checks)
}

/// Scaling behavior of the weight element: `h` by `η`, `f` by `η²`,
/// determinants `η^{28}` and `η^{-28}` for the inverse parameterization.
pub fn suite_scaling(t: &Tables, cfg: &Config) -> SuiteReport {
    let q = RatField;
    let mut checks = Vec::new();
    let base: FTable<_> = f_table_in_ring(&t.f4, &q);
    for eta_i in [2i64, 3] {
        let eta = q.from_i64(eta_i);
        let tok = Token::TorusWeight { eta: eta.clone() };
        let pulled = pullback_f_token(&t.cb, &q, &base, &tok);
        let eta2 = q.mul(&eta, &eta);
        let scaled: FTable<_> = base
            .iter()
            .map(|(k, v)| (*k, q.mul(v, &eta2)))
            .collect();
        checks.push(Check::new(
            format!("f scales by η² at η={eta_i}"),
            pulled == scaled,
            "pulled-back coefficient table equals η²·f exactly",
        ));
        let tm = torus_weight(&t.cb, &q, &eta).unwrap();
        let hm = t.h.matrix(&q);
        let pulled_h = tm.transpose().mul(&hm).mul(&tm);
        let scaled_h = hm.map_ring(q, |x| q.mul(x, &eta));
        checks.push(Check::new(
            format!("h scales by η at η={eta_i}"),
            pulled_h == scaled_h,
            "pulled-back Gram matrix equals η·h exactly",
        ));
        checks.push(Check::new(
            format!("det torus_weight({eta_i}) = {eta_i}^28"),
            tm.det() == q.pow_i64(&eta, 28),
            "weight element determinant",
        ));
        let inv = q.inv(&eta).unwrap();
        let tm_inv = torus_weight(&t.cb, &q, &inv).unwrap();
        checks.push(Check::new(
            format!("det of the inverse parameterization at η={eta_i} is {eta_i}^-28"),
            tm_inv.det() == q.pow_i64(&eta, -28),
            "matches the determinant of the paper-normalized weight element",
        ));
    }
    SuiteReport::assemble("scaling", cfg, checks)
}

/// All 133 generators vanish along the highest weight orbit: at `g·e_λ`
/// for random words `g` and weights `λ`.
pub fn suite_orbit_vanish(t: &Tables, cfg: &Config) -> SuiteReport {
    let checks: Vec<Check> = cfg
        .primes
        .par_iter()
        .map(|&p| {
            let fp = PrimeField::new(p);
            let gens: Vec<_> = t
                .basis
                .generators()
                .iter()
                .map(|(n, q)| {
                    (
                        n,
                        q.map_ring(&fp, |v| fp.from_bigint(v)),
                    )
                })
                .collect();
            let mut rng = Lcg::new(cfg.seed ^ p);
            let mut tested = 0usize;
            for wi in 0..100u64 {
                let word = random_word(&t.cb, &fp, cfg.seed.wrapping_add(wi * 977 + p), cfg.word_length);
                for _ in 0..10 {
                    let lam = rng.below(56) as usize;
                    let mut v = vec![fp.zero(); DIM];
                    v[lam] = fp.one();
                    let gv = apply_word(&t.cb, &fp, &word, &v).unwrap();
                    for (name, q) in &gens {
                        if !fp.is_zero(&q.eval(&gv)) {
                            return Check::new(
                                format!("orbit vanishing over fp({p})"),
                                false,
                                format!("{name} nonzero at word {wi} on weight {}", lam + 1),
                            );
                        }
                    }
                    tested += 1;
                }
            }
            Check::new(
                format!("orbit vanishing over fp({p})"),
                true,
                format!("133 generators vanish on {tested} orbit samples"),
            )
        })
        .collect();
    SuiteReport::assemble("orbit-vanish", cfg, checks)
}

/// Agreement of the two membership routes on members (random words in
/// generators and torus) and non-members (a diagonal scaling and random
/// invertible matrices).
pub fn suite_cross_check(t: &Tables, cfg: &Config) -> SuiteReport {
    let mut checks = Vec::new();

    // members and the diagonal non-member over the rationals
    {
        let q = RatField;
        let reducer = Reducer::new(&t.cb, &t.basis, q);
        let word_checks: Vec<Check> = (0..20u64)
            .into_par_iter()
            .map(|i| {
                let w = random_word(&t.cb, &q, cfg.seed.wrapping_add(i), cfg.word_length);
                let m = evaluate_word(&t.cb, &q, &w).unwrap();
                agree_check(t, &reducer, &q, &m, true, &format!("rat word {i}"))
            })
            .collect();
        checks.extend(word_checks);
        let mut d = Matrix::identity(q, DIM);
        d.set(0, 0, q.from_i64(2));
        checks.push(agree_check(t, &reducer, &q, &d, false, "rat diag(2,1,…,1)"));
    }

    for &p in &cfg.primes {
        let fp = PrimeField::new(p);
        let reducer = Reducer::new(&t.cb, &t.basis, fp);
        let word_checks: Vec<Check> = (0..20u64)
            .into_par_iter()
            .map(|i| {
                let w = random_word(&t.cb, &fp, cfg.seed.wrapping_add(i), cfg.word_length);
                let m = evaluate_word(&t.cb, &fp, &w).unwrap();
                agree_check(t, &reducer, &fp, &m, true, &format!("fp({p}) word {i}"))
            })
            .collect();
        checks.extend(word_checks);
        let mut rng = Lcg::new(cfg.seed ^ (p << 8));
        let mut rands = Vec::new();
        while rands.len() < 20 {
            let mut m = Matrix::zero(fp, DIM, DIM);
            for i in 0..DIM {
                for j in 0..DIM {
                    m.set(i, j, rng.below(p as u32) as u64);
                }
            }
            if !fp.is_zero(&m.det()) {
                rands.push(m);
            }
        }
        let rand_checks: Vec<Check> = rands
            .par_iter()
            .enumerate()
            .map(|(i, m)| agree_check(t, &reducer, &fp, m, false, &format!("fp({p}) random {i}")))
            .collect();
        checks.extend(rand_checks);
        let mut d = Matrix::identity(fp, DIM);
        d.set(0, 0, fp.from_i64(2));
        checks.push(agree_check(
            t,
            &reducer,
            &fp,
            &d,
            false,
            &format!("fp({p}) diag(2,1,…,1)"),
        ));
    }
    SuiteReport::assemble("cross-check", cfg, checks)
}

fn agree_check<R: Field>(
    t: &Tables,
    reducer: &Reducer<R>,
    ring: &R,
    m: &Matrix<R>,
    expect_member: bool,
    label: &str,
) -> Check
where
    R::Elem: Ord,
{
    let gi = match membership_gi(&t.basis, reducer, ring, m) {
        Ok(v) => v,
        Err(e) => return Check::new(format!("cross-check {label}"), false, format!("{e}")),
    };
    let fo = match membership_forms(&t.cb, &t.h, &t.f4, ring, m) {
        Ok(v) => v,
        Err(e) => return Check::new(format!("cross-check {label}"), false, format!("{e}")),
    };
    if gi.member != fo.member {
        return Check::new(
            format!("cross-check {label}"),
            false,
            format!("routes disagree: ideal={} forms={}", gi.member, fo.member),
        );
    }
    if gi.member != expect_member {
        return Check::new(
            format!("cross-check {label}"),
            false,
            format!("expected member={expect_member}, both routes said {}", gi.member),
        );
    }
    let detail = if gi.member {
        let eh = fo.eps_h.map(|e| ring.format(&e)).unwrap_or_default();
        let ef = fo.eps_f.map(|e| ring.format(&e)).unwrap_or_default();
        format!("both accept; ε_h={eh}, ε_f={ef}")
    } else {
        let (wname, wdetail) = gi.witness.unwrap_or_default();
        format!("both reject; ideal witness {wname}: {wdetail}")
    };
    Check::new(format!("cross-check {label}"), true, detail)
}
