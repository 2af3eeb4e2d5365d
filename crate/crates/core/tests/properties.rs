use ffpage::cli::table::Table;
use ffpage::exact_oracle::compare_with_gaussian;
use ffpage::gaussian_state::{entropy, reduce, SubsystemSelection};
use ffpage::quench::{HamiltonianSpec, Hopping};
use ffpage::rfg::{sample_covariance, BoundConstants, BoundKind, EnsembleConfig};
use proptest::prelude::*;

fn hopping(max_range: usize) -> impl Strategy<Value = Hopping> {
    (1..=max_range, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(range, a, b, im)| Hopping {
        range,
        even: ffpage::quench::Amplitude::Complex([a, im]),
        odd: ffpage::quench::Amplitude::Real(b),
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Any period-2 hopping model: covariance entropies agree with Fock space.
    #[test]
    fn gaussian_entropy_matches_fock_space(
        n in prop::sample::select(vec![4usize, 6]),
        hops in prop::collection::vec(hopping(3), 1..3),
        t in 0.0f64..50.0,
    ) {
        let hops: Vec<_> = hops.into_iter().filter(|h| h.range < n).collect();
        prop_assume!(!hops.is_empty());
        let spec = HamiltonianSpec::new(n, hops).unwrap();
        for c in compare_with_gaussian(&spec, &[t]).unwrap() {
            prop_assert!(c.abs_diff() < 1e-8, "t={} start={} n_a={}: {} vs {}", c.t, c.start, c.n_a, c.gaussian, c.fock);
        }
    }

    /// A pure state has equal entropy on both sides of any cut.
    #[test]
    fn complementary_entropies_agree(seed in any::<u64>(), n_a in 1usize..12) {
        let cfg = EnsembleConfig::new(12, 5, 1, seed).unwrap();
        let c = sample_covariance(&cfg, 0).unwrap();
        let a = reduce(&c, &SubsystemSelection::prefix(n_a).unwrap()).unwrap();
        let b = reduce(&c, &SubsystemSelection::new((n_a..12).collect()).unwrap()).unwrap();
        let (sa, sb) = (entropy(&a).unwrap(), entropy(&b).unwrap());
        prop_assert!((sa - sb).abs() < 1e-8);
        prop_assert!(sa >= 0.0 && sa <= n_a.min(12 - n_a) as f64 + 1e-12);
    }

    /// Bounds never increase with epsilon and never exceed 2.
    #[test]
    fn bounds_are_monotone(n in 10usize..500, frac in 0.01f64..1.0, e1 in 0.0f64..50.0, de in 0.0f64..50.0) {
        let n_a = ((n as f64 * frac) as usize).max(1);
        let k = BoundConstants::new(n, n_a);
        for kind in BoundKind::ALL {
            if let (Some(a), Some(b)) = (k.bound(kind, e1 + 1e-9), k.bound(kind, e1 + 1e-9 + de)) {
                prop_assert!(b <= a && a <= 2.0);
            }
        }
    }

    /// Tables written with `cell` parse back to the same bits.
    #[test]
    fn table_round_trip_is_lossless(values in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..20)) {
        let mut t = Table::new(&["i", "v"]).meta("seed", 3);
        for (i, v) in values.iter().enumerate() {
            t.push(vec![i.to_string(), ffpage::cli::table::cell(*v)]);
        }
        let back = Table::parse(&t.to_csv().unwrap()).unwrap();
        prop_assert_eq!(&back, &t);
        let col = back.f64_column("v").unwrap();
        for (a, b) in col.iter().zip(&values) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
