use activeres::channels::apply_epcpr;
use activeres::monotones::{activity_weight, relent_activity, robustness_of_activity};
use activeres::sampling::Sampler;
use activeres::states::{ergotropy, is_passive, passive_rearrangement};
use activeres::{DensityMatrix, EpcprChannel, HamiltonianSpectrum, SolverOptions};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn faithfulness(seed in any::<u64>(), d in 2usize..=5, passive in any::<bool>()) {
        let opts = SolverOptions::default();
        let mut s = Sampler::new(seed);
        let rho = if passive { s.passive(d).to_density() } else { s.density(d) };
        let h = HamiltonianSpectrum::ladder(d);
        let is_p = is_passive(&rho, &h, 1e-7).unwrap();
        for v in [activity_weight(&rho, &opts).unwrap().value, robustness_of_activity(&rho, &opts).unwrap().value] {
            prop_assert_eq!(v <= 1e-7, is_p, "value {} passive {}", v, is_p);
        }
    }

    #[test]
    fn convexity(seed in any::<u64>(), d in 2usize..=4, p in 0.0f64..=1.0) {
        let opts = SolverOptions::default();
        let mut s = Sampler::new(seed);
        let a = s.density(d);
        let b = s.density(d);
        let mix = a.mix(p, &b).unwrap();
        let aw = |x: &DensityMatrix| activity_weight(x, &opts).unwrap().value;
        let ar = |x: &DensityMatrix| robustness_of_activity(x, &opts).unwrap().value;
        prop_assert!(aw(&mix) <= p * aw(&a) + (1.0 - p) * aw(&b) + 1e-7);
        prop_assert!(ar(&mix) <= p * ar(&a) + (1.0 - p) * ar(&b) + 1e-7);
    }

    #[test]
    fn ergotropy_never_increases_under_epcpr(seed in any::<u64>(), d in 2usize..=5) {
        let mut s = Sampler::new(seed);
        let rho = s.density(d);
        let h = s.spectrum(d);
        let out = apply_epcpr(&s.epcpr(d), &rho).unwrap();
        prop_assert!(ergotropy(&out, &h).unwrap() <= ergotropy(&rho, &h).unwrap() + 1e-12);
    }

    #[test]
    fn rearrangement_is_passive_with_zero_monotones(seed in any::<u64>(), d in 2usize..=5) {
        let mut s = Sampler::new(seed);
        let rho = s.density(d);
        let h = s.spectrum(d);
        let pas = passive_rearrangement(&rho, &h).unwrap();
        prop_assert!(is_passive(&pas, &h, 1e-12).unwrap());
        prop_assert!(relent_activity(&pas).value <= 1e-12);
    }

    #[test]
    fn json_roundtrip_is_bit_exact(seed in any::<u64>(), d in 2usize..=5) {
        let mut s = Sampler::new(seed);
        let rho = s.density(d);
        let text = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        for i in 0..d {
            for j in 0..d {
                prop_assert_eq!(back.entry(i, j).re.to_bits(), rho.entry(i, j).re.to_bits());
                prop_assert_eq!(back.entry(i, j).im.to_bits(), rho.entry(i, j).im.to_bits());
            }
        }
        let chan = s.epcpr(d);
        let text = serde_json::to_string(&chan).unwrap();
        let back: EpcprChannel = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
