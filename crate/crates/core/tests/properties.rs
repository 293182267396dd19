use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabfun::algebra::{self, Algebra, Hom, Module, Quiver};
use stabfun::complexes::{self, ChainMap, Complex};
use stabfun::corpus::{self, Family};
use stabfun::exactlin::Matrix;
use stabfun::functors::FunctorData;
use stabfun::gorenstein;
use stabfun::stable::{self, StableFunctor};

const P: u32 = 101;

fn corpus1() -> &'static Family {
    static C: OnceLock<Family> = OnceLock::new();
    C.get_or_init(|| Family::default_prime(1).unwrap())
}

fn dual_numbers() -> Arc<Algebra> {
    let q = Quiver::new(vec!["0".into()], vec![]).unwrap();
    Arc::new(Algebra::new(P, q, vec![]).unwrap().dual_numbers_extension().unwrap())
}

fn algebras() -> Vec<Arc<Algebra>> {
    let c = corpus1();
    vec![c.a.clone(), c.b.clone(), c.lambda.clone(), c.gamma.clone(), dual_numbers()]
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
    // low-rank structure shows up more often with many zeros
    let data = (0..r * c).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..P) }).collect();
    Matrix::from_vec(P, r, c, data)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rref_is_idempotent(seed in any::<u64>(), r in 0usize..7, c in 0usize..7) {
        let m = random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), r, c);
        let (e, piv) = m.rref();
        let (e2, piv2) = e.rref();
        prop_assert_eq!(e, e2);
        prop_assert_eq!(piv, piv2);
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), r in 0usize..7, c in 0usize..7) {
        let m = random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), r, c);
        let ns = m.nullspace();
        prop_assert_eq!(m.rank() + ns.len(), c);
        for v in &ns {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solutions_are_exact(seed in any::<u64>(), r in 1usize..6, c in 1usize..6, k in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, r, c);
        let b = random_matrix(&mut rng, r, k);
        if let Some(x) = a.solve(&b).unwrap() {
            prop_assert_eq!(a.mul(&x), b);
        }
    }

    #[test]
    fn hom_from_projective_is_evaluation(seed in any::<u64>(), which in 0usize..5) {
        let alg = &algebras()[which];
        let m = corpus::random_module(alg, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        for v in 0..alg.num_vertices() {
            let pv = Module::projective(alg, v);
            prop_assert_eq!(algebra::hom_dim(&pv, &m).unwrap(), m.dims[v]);
        }
    }

    #[test]
    fn ext_is_independent_of_resolution_length(seed in any::<u64>(), which in 0usize..5, i in 0usize..4) {
        let alg = &algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = corpus::random_module(alg, 2, &mut rng);
        let n = corpus::random_module(alg, 2, &mut rng);
        let short = algebra::minimal_resolution(&m, i + 2);
        let long = algebra::minimal_resolution(&m, i + 5);
        prop_assert_eq!(algebra::ext_from_resolution(&short, &n, i), algebra::ext_from_resolution(&long, &n, i));
    }

    #[test]
    fn decompose_partitions(seed in any::<u64>(), which in 0usize..5) {
        let alg = &algebras()[which];
        let m = corpus::random_module(alg, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let d = algebra::decompose(&m, seed).unwrap();
        let mut total = vec![0; alg.num_vertices()];
        for part in &d.parts {
            prop_assert!(algebra::has_local_endomorphisms(part).unwrap());
            for (t, x) in total.iter_mut().zip(&part.dims) {
                *t += x;
            }
        }
        prop_assert_eq!(total, m.dims.clone());
        let sum = algebra::direct_sum(&d.parts).unwrap();
        prop_assert!(algebra::is_isomorphic(&sum, &m).unwrap());
    }

    #[test]
    fn syzygies_over_dual_numbers_do_not_vanish(seed in any::<u64>()) {
        let alg = dual_numbers();
        let m = corpus::random_module(&alg, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let proj = algebra::is_projective(&m).unwrap();
        prop_assert_eq!(algebra::syzygy(&m, 1).unwrap().is_zero(), proj);
    }

    #[test]
    fn brutal_truncation_splits(seed in any::<u64>(), which in 0usize..5, m in -2i64..3) {
        let alg = &algebras()[which];
        let c = corpus::random_complex(alg, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let hi = complexes::brutal_truncate_geq(&c, m);
        let lo = complexes::brutal_truncate_lt(&c, m);
        for i in c.lo - 1..=c.hi() + 1 {
            let sum: Vec<usize> = hi.dims(i).iter().zip(lo.dims(i)).map(|(a, b)| a + b).collect();
            prop_assert_eq!(sum, c.dims(i));
        }
        // the differential crossing the cut is the only one lost
        for i in c.lo..c.hi() {
            let kept = if i >= m { hi.diff(i) } else if i + 1 < m { lo.diff(i) } else { continue };
            prop_assert_eq!(kept, c.diff(i));
        }
    }

    #[test]
    fn hom_d_window_independence(seed in any::<u64>(), which in 0usize..5, n in -2i64..3) {
        let alg = &algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = corpus::random_complex(alg, 2, &mut rng).unwrap();
        let y = corpus::random_complex(alg, 2, &mut rng).unwrap();
        if let Some((ylo, _)) = y.support() {
            let w = complexes::hom_d_window(ylo, n).min(x.lo - 1);
            let a = complexes::projective_resolution(&x, w).unwrap();
            let b = complexes::projective_resolution(&x, w - 3).unwrap();
            prop_assert_eq!(
                complexes::hom_d_with(&a.proj, &y, n, alg),
                complexes::hom_d_with(&b.proj, &y, n, alg)
            );
        }
    }

    #[test]
    fn cone_acyclic_iff_quasi_iso(seed in any::<u64>(), which in 0usize..5) {
        let alg = &algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = corpus::random_module(alg, 2, &mut rng);
        let n = corpus::random_module(alg, 2, &mut rng);
        let basis = algebra::hom_space(&m, &n).unwrap();
        let mut h = Hom::zero(&m, &n);
        for b in &basis {
            h = h.add(&b.scale(rng.gen_range(0..P)));
        }
        if rng.gen_bool(0.3) {
            // an isomorphism onto a copy
            h = Hom::identity(&m);
            let f = ChainMap { maps: [(0, h.clone())].into_iter().collect() };
            let x = Complex::from_module(&m, 0);
            let cone = complexes::cone(&f, &x, &x).cone;
            prop_assert!(complexes::is_acyclic(&cone));
            prop_assert!(complexes::is_quasi_iso(&f, &x, &x));
        } else {
            let f = ChainMap { maps: [(0, h.clone())].into_iter().collect() };
            let (x, y) = (Complex::from_module(&m, 0), Complex::from_module(&n, 0));
            let cone = complexes::cone(&f, &x, &y).cone;
            prop_assert_eq!(complexes::is_acyclic(&cone), complexes::is_quasi_iso(&f, &x, &y));
            prop_assert_eq!(complexes::is_acyclic(&cone), h.is_iso());
        }
    }

    #[test]
    fn functor_images_stay_in_window(seed in any::<u64>(), which in 0usize..2) {
        let c = corpus1();
        let (f, src) = if which == 0 { (&c.f, &c.b) } else { (&c.f_ext, &c.gamma) };
        let x = corpus::random_module(src, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let res = algebra::minimal_resolution(&x, 3);
        let pc = complexes::ProjComplex::from_resolution(&res);
        let img = f.apply_proj(&pc).to_complex(&f.target);
        let (lo, hi) = (pc.lo, pc.hi() + f.width());
        for i in img.lo..=img.hi() {
            if i < lo || i > hi {
                prop_assert!(complexes::homology(&img, i).is_zero());
            }
        }
    }

    #[test]
    fn perturbed_and_minimal_truncations(seed in any::<u64>()) {
        let c = corpus1();
        let sf = StableFunctor::new(c.f_ext.clone()).unwrap();
        let x = corpus::random_module(&c.gamma, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let t = sf.triangle(&x).unwrap();
        // U is a bounded complex of projectives starting in degree 1
        prop_assert!(t.u.check(&c.lambda).is_ok());
        prop_assert!(t.u.support().map_or(true, |(lo, _)| lo >= 1));
        let om = stable::StableFunctor::new(FunctorData::omega(&c.gamma, 1)).unwrap();
        // Omega commutes with the stable functor
        let lhs = sf.stable_image(&algebra::syzygy(&x, 1).unwrap()).unwrap();
        let rhs = algebra::syzygy(t.module(), 1).unwrap();
        prop_assert!(stable::stable_iso(&lhs, &rhs).unwrap());
        prop_assert!(stable::stable_iso(&om.stable_image(&x).unwrap(), &algebra::syzygy(&x, 1).unwrap()).unwrap());
    }

    #[test]
    fn refutations_are_sound(seed in any::<u64>(), which in 0usize..2) {
        let alg = &algebras()[which];
        let x = corpus::random_module(alg, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let rep = gorenstein::is_gorenstein_projective(&x, 4).unwrap();
        prop_assert!(gorenstein::verify_refutation(&x, &rep).unwrap());
        // finite global dimension: GP means projective
        prop_assert_eq!(rep.is_gp(), algebra::is_projective(&x).unwrap());
    }

    #[test]
    fn depth_monotone(seed in any::<u64>(), which in 0usize..5, d in 1usize..5) {
        let alg = &algebras()[which];
        let x = corpus::random_module(alg, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        if gorenstein::is_gorenstein_projective(&x, d + 2).unwrap().is_gp() {
            prop_assert!(gorenstein::is_gorenstein_projective(&x, d).unwrap().is_gp());
        }
    }

    #[test]
    fn everything_is_perpendicular_over_dual_numbers(seed in any::<u64>()) {
        let alg = dual_numbers();
        let x = corpus::random_module(&alg, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(gorenstein::perp_check(&x, 0, 5).unwrap());
        let y = algebra::syzygy(&x, 1).unwrap();
        prop_assert!(algebra::is_isomorphic(
            &algebra::syzygy(&gorenstein::cosyzygy(&y).unwrap(), 1).unwrap(),
            &y
        ).unwrap());
    }
}

#[test]
fn gamma_samples_are_perpendicular() {
    let c = corpus1();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // Gamma has infinite global dimension, but the tensor factor alone does not make
    // every module GP; the Gorenstein projectives are exactly the perpendicular ones
    let mut gp = 0;
    for _ in 0..30 {
        let x = corpus::random_module(&c.gamma, 2, &mut rng);
        let rep = gorenstein::is_gorenstein_projective(&x, 4).unwrap();
        assert_eq!(rep.is_gp(), gorenstein::perp_check(&x, 0, 4).unwrap());
        gp += rep.is_gp() as usize;
    }
    assert!(gp > 0);
}

#[test]
fn gp_closed_under_syzygy_and_images() {
    let c = corpus1();
    let sf = StableFunctor::new(c.f_ext.clone()).unwrap();
    let om = StableFunctor::new(FunctorData::omega(&c.lambda, 1)).unwrap();
    for m in &c.modules {
        let x = &m.module;
        let s = algebra::syzygy(x, 1).unwrap();
        assert!(gorenstein::is_gorenstein_projective(&s, 6).unwrap().is_gp());
        let rep = gorenstein::gp_preservation_check(&sf, x, 6).unwrap();
        assert!(rep.preserved);
        let img = sf.stable_image(x).unwrap();
        assert!(gorenstein::gp_preservation_check(&om, &img, 6).unwrap().preserved);
        // cosyzygy undoes syzygy on Gorenstein projectives
        let back = gorenstein::cosyzygy(&s).unwrap();
        assert!(stable::stable_iso(&back, x).unwrap());
    }
}

#[test]
fn composition_of_stable_functors() {
    let c = corpus1();
    let f = StableFunctor::new(c.f_ext.clone()).unwrap();
    let g = StableFunctor::new(c.g_ext.shifted(-1)).unwrap();
    let gf = StableFunctor::new(c.f_ext.compose(&c.g_ext.shifted(-1)).unwrap()).unwrap();
    for m in &c.modules {
        let lhs = gf.stable_image(&m.module).unwrap();
        let rhs = g.stable_image(&f.stable_image(&m.module).unwrap()).unwrap();
        assert!(stable::stable_iso(&lhs, &rhs).unwrap(), "M({},{})", m.i, m.l);
    }
}

#[test]
fn corpus_sequences_hold_as_loaded() {
    for n in [1, 2] {
        let c = Family::default_prime(n).unwrap();
        for m in &c.modules {
            match &m.ses {
                Some(s) => {
                    assert!(s.f.is_hom(&s.sub, &s.mid) && s.g.is_hom(&s.mid, &s.quot));
                    assert!(s.f.is_mono() && s.g.is_epi() && s.g.compose(&s.f).is_zero());
                    assert_eq!(s.mid.total_dim(), s.sub.total_dim() + s.quot.total_dim());
                }
                None => assert!(algebra::is_isomorphic(&m.module, &c.s_tensor_q(m.i)).unwrap()),
            }
        }
    }
}
