//! Seeded generator for artificial high-interconnectivity networks.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::crn::{Reaction, ReactionNetwork};
use crate::error::{Error, Result};

/// Generates a random network in which every species anchors
/// `reactions_per_species` reactions with one to three random partner
/// species, plus a forced sink so the optimal pathway is nontrivial.
///
/// Costs are drawn uniformly from `cost_range`; every reaction gets the
/// quantity bounds in `bound_range`. The same seed always yields the same
/// network.
pub fn generate_artificial(
    num_species: usize,
    reactions_per_species: usize,
    seed: u64,
    cost_range: (f64, f64),
    bound_range: (i64, i64),
) -> Result<ReactionNetwork> {
    if num_species == 0 || reactions_per_species == 0 {
        return Err(Error::Config(
            "artificial networks need at least one species and one reaction per species".into(),
        ));
    }
    if cost_range.0 < 0.0 || cost_range.0 > cost_range.1 {
        return Err(Error::Config(format!(
            "cost range [{}, {}] must be ordered and non-negative",
            cost_range.0, cost_range.1
        )));
    }
    if bound_range.0 < 0 || bound_range.0 > bound_range.1 {
        return Err(Error::InvalidBounds { lower: bound_range.0, upper: bound_range.1 });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (num_species.max(2) - 1).to_string().len();
    let species: Vec<String> =
        (0..num_species).map(|i| format!("S{i:0width$}")).collect();

    let mut draw_cost = |rng: &mut ChaCha8Rng| {
        if cost_range.0 == cost_range.1 {
            cost_range.0
        } else {
            rng.gen_range(cost_range.0..=cost_range.1)
        }
    };

    let mut reactions = Vec::with_capacity(num_species * reactions_per_species + 1);
    for anchor in 0..num_species {
        for k in 0..reactions_per_species {
            let mut stoich: BTreeMap<String, i64> = BTreeMap::new();
            let anchor_coeff = rng.gen_range(1..=3i64);
            let anchor_consumes = rng.gen_bool(0.5);
            stoich.insert(
                species[anchor].clone(),
                if anchor_consumes { -anchor_coeff } else { anchor_coeff },
            );
            let partners = rng.gen_range(1..=3usize).min(num_species - 1);
            while stoich.len() < partners + 1 {
                let other = rng.gen_range(0..num_species);
                if other == anchor || stoich.contains_key(&species[other]) {
                    continue;
                }
                let coeff = rng.gen_range(1..=3i64);
                let consumes = rng.gen_bool(0.5);
                stoich.insert(species[other].clone(), if consumes { -coeff } else { coeff });
            }
            // A reaction that only consumes or only produces is a degenerate
            // source/sink; flip one partner so mass can actually flow.
            if stoich.values().all(|&v| v > 0) || stoich.values().all(|&v| v < 0) {
                let key = stoich.keys().next().cloned().expect("non-empty stoich");
                let v = stoich[&key];
                stoich.insert(key, -v);
            }
            let unit_cost = draw_cost(&mut rng);
            let fixed_cost = draw_cost(&mut rng);
            reactions.push(Reaction {
                id: format!("R{anchor:0width$}_{k}"),
                stoich,
                unit_cost,
                fixed_cost,
                bounds: bound_range,
            });
        }
    }

    // Forced production target: one unit of a random species must leave the
    // network, so the zero pathway is infeasible.
    let target = rng.gen_range(0..num_species);
    let unit_cost = draw_cost(&mut rng);
    reactions.push(Reaction {
        id: "target_sink".into(),
        stoich: BTreeMap::from([(species[target].clone(), -1)]),
        unit_cost,
        fixed_cost: 0.0,
        bounds: (1, 1),
    });

    ReactionNetwork::new(format!("artificial_seed{seed}"), species, reactions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crn::build_qubo;
    use crate::encodings::EncodingScheme;

    #[test]
    fn same_seed_is_identical() {
        let a = generate_artificial(10, 3, 7, (1.0, 10.0), (0, 5)).unwrap();
        let b = generate_artificial(10, 3, 7, (1.0, 10.0), (0, 5)).unwrap();
        assert_eq!(a, b);
        let c = generate_artificial(10, 3, 8, (1.0, 10.0), (0, 5)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn two_species_toy() {
        let network = generate_artificial(2, 1, 42, (1.0, 10.0), (0, 3)).unwrap();
        assert_eq!(network.num_species(), 2);
        assert_eq!(network.num_reactions(), 2 + 1);
    }

    #[test]
    fn anchor_species_participates() {
        let network = generate_artificial(20, 4, 3, (1.0, 10.0), (0, 5)).unwrap();
        for s in &network.species {
            let appearances = network
                .reactions
                .iter()
                .filter(|r| r.stoich.contains_key(s))
                .count();
            assert!(appearances >= 4, "species {s} appears in {appearances} reactions");
        }
    }

    #[test]
    fn paper_scale_unary_size_lands_in_the_thousands() {
        let network = generate_artificial(100, 10, 1, (1.0, 10.0), (0, 10)).unwrap();
        let qubo = build_qubo(&network, EncodingScheme::Unary).unwrap();
        assert!(qubo.num_vars() > 5_000 && qubo.num_vars() < 50_000, "{}", qubo.num_vars());
    }
}
