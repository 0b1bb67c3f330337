// Copyright 2026 squid-cphase Contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use squid_cphase::dynamics::{drive_evolve, excitation_number, jc_evolve, DrivePulse, JcInteraction};
use squid_cphase::hilbert::{BasisLabel, HilbertSpace, SquidLevel, SystemState};

use common::{distance, random_state};

fn setup(n: usize, n_max: usize, seed: u64, clear: &[usize]) -> SystemState {
    let space = HilbertSpace::new(n, n_max).unwrap();
    random_state(&mut StdRng::seed_from_u64(seed), space, clear)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exchange_preserves_norm_and_excitations(
        n in 1usize..=3, n_max in 2usize..=4, seed in any::<u64>(),
        pick in 0usize..3, g in 1e8f64..2e10, turns in 0.0f64..5.0,
    ) {
        let squid = pick % n + 1;
        let psi = setup(n, n_max, seed, &[squid]);
        let op = JcInteraction { squid, g, duration: turns / g };
        let out = jc_evolve(&psi, &op).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        let before = excitation_number(&psi, squid).unwrap();
        let after = excitation_number(&out, squid).unwrap();
        prop_assert!((before - after).abs() < 1e-12, "{} vs {}", before, after);
    }

    #[test]
    fn drive_preserves_norm_and_level_zero(
        n in 1usize..=3, seed in any::<u64>(), pick in 0usize..3,
        rabi in 1e8f64..3e10, phase in -3.2f64..3.2, turns in 0.0f64..6.0,
    ) {
        let squid = pick % n + 1;
        let psi = setup(n, 3, seed, &[]);
        let out = drive_evolve(&psi, &DrivePulse { squid, rabi, phase, duration: turns / rabi }).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        let space = psi.space();
        for i in 0..space.dim() {
            if space.level_at(i, squid) == SquidLevel::L0 {
                prop_assert_eq!(out.amplitudes()[i], psi.amplitudes()[i]);
            }
        }
    }

    #[test]
    fn exchange_leaves_spectators_and_level_one_untouched(
        n in 2usize..=3, bits in 0usize..8, extra in 0usize..3, photons in 0usize..3,
        pick in 0usize..3, g in 1e8f64..2e10, turns in 0.0f64..5.0,
    ) {
        let squid = pick % n + 1;
        let mut label = BasisLabel::from_bits(bits % (1 << n), n);
        label.levels[extra % n] = SquidLevel::L2;
        label.photon = photons;
        let space = HilbertSpace::new(n, 3).unwrap();
        let psi = SystemState::basis_state(space, &label).unwrap();
        let out = jc_evolve(&psi, &JcInteraction { squid, g, duration: turns / g }).unwrap();
        for (i, z) in out.amplitudes().iter().enumerate() {
            let moved_spectator = (1..=n)
                .filter(|&s| s != squid)
                .any(|s| space.level_at(i, s) != label.levels[s - 1]);
            if moved_spectator {
                prop_assert_eq!(*z, Complex64::new(0.0, 0.0));
            }
        }
        if label.levels[squid - 1] == SquidLevel::L1 {
            prop_assert_eq!(out.amplitudes(), psi.amplitudes());
        }
    }

    #[test]
    fn evolutions_compose(
        seed in any::<u64>(), g in 1e8f64..2e10, t1 in 0.0f64..3.0, t2 in 0.0f64..3.0,
        phase in -3.2f64..3.2,
    ) {
        let psi = setup(2, 4, seed, &[1, 2]);
        let jc = |s: &SystemState, t: f64| jc_evolve(s, &JcInteraction { squid: 2, g, duration: t / g }).unwrap();
        let two_steps = jc(&jc(&psi, t1), t2);
        let one_step = jc(&psi, t1 + t2);
        prop_assert!(distance(&two_steps, &one_step) < 1e-12);

        let drive = |s: &SystemState, t: f64| {
            drive_evolve(s, &DrivePulse { squid: 1, rabi: g, phase, duration: t / g }).unwrap()
        };
        let two = drive(&drive(&psi, t1), t2);
        let one = drive(&psi, t1 + t2);
        prop_assert!(distance(&two, &one) < 1e-12);
    }
}
