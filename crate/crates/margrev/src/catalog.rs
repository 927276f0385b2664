//! Builders for commonly used agent models.

use crate::model::{AgentModel, ModelError, OutcomeRecord, TypeRecord};

/// Quasilinear single-dimensional agent. The outcome menu is the no-sale
/// outcome plus one sale outcome per distinct value on the type grid, so
/// posted lotteries over the value grid are expressible exactly.
pub fn quasilinear_agent(
    values: &[f64],
    masses: &[f64],
    downward_closed: bool,
) -> Result<AgentModel, ModelError> {
    assert_eq!(values.len(), masses.len());
    let mut prices: Vec<f64> = values.to_vec();
    prices.sort_by(|a, b| a.partial_cmp(b).unwrap());
    prices.dedup();
    let mut outcomes = vec![OutcomeRecord {
        service: false,
        payment: 0.0,
    }];
    outcomes.extend(prices.iter().map(|&p| OutcomeRecord {
        service: true,
        payment: p,
    }));
    let types = values
        .iter()
        .zip(masses)
        .map(|(&v, &mass)| TypeRecord {
            mass,
            utilities: outcomes
                .iter()
                .map(|w| if w.service { v - w.payment } else { 0.0 })
                .collect(),
        })
        .collect();
    AgentModel::new(types, outcomes, downward_closed)
}

/// Value uniform on {1/m, 2/m, ..., 1}, equal masses. The m -> infinity
/// limit is the textbook uniform-[0,1] agent with R(q) = q - q^2.
pub fn uniform_grid_agent(m: usize, downward_closed: bool) -> AgentModel {
    let values: Vec<f64> = (1..=m).map(|k| k as f64 / m as f64).collect();
    let masses = vec![1.0 / m as f64; m];
    quasilinear_agent(&values, &masses, downward_closed).expect("uniform agent is valid")
}

/// Single-dimensional agent with a public budget: utility is value times
/// service minus payment, and the menu only offers payments up to the
/// budget. Non-service outcomes that still charge (up to B) are included
/// so the optimal budget lottery "pay B, served with probability pi" is
/// expressible.
pub fn budget_agent(budget: f64, m: usize) -> Result<AgentModel, ModelError> {
    let values: Vec<f64> = (1..=m).map(|k| k as f64 / m as f64).collect();
    let mut prices: Vec<f64> = values.iter().copied().filter(|&v| v < budget).collect();
    prices.push(budget);
    let mut outcomes = vec![OutcomeRecord {
        service: false,
        payment: 0.0,
    }];
    for &p in &prices {
        outcomes.push(OutcomeRecord {
            service: true,
            payment: p,
        });
        outcomes.push(OutcomeRecord {
            service: false,
            payment: p,
        });
    }
    let types = values
        .iter()
        .map(|&v| TypeRecord {
            mass: 1.0 / m as f64,
            utilities: outcomes
                .iter()
                .map(|w| if w.service { v - w.payment } else { -w.payment })
                .collect(),
        })
        .collect();
    AgentModel::new(types, outcomes, false)
}

/// Quasilinear agent on an equal-mass atom grid with the given sorted or
/// unsorted values; masses are multiples of 1/atoms.
pub fn quasilinear_with_atoms(
    values: &[f64],
    atom_counts: &[usize],
    downward_closed: bool,
) -> Result<AgentModel, ModelError> {
    let total: usize = atom_counts.iter().sum();
    let masses: Vec<f64> = atom_counts
        .iter()
        .map(|&k| k as f64 / total as f64)
        .collect();
    quasilinear_agent(values, &masses, downward_closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_agent_shape() {
        let a = uniform_grid_agent(4, false);
        assert_eq!(a.n_types(), 4);
        assert_eq!(a.atoms, 4);
        assert_eq!(a.n_outcomes(), 5);
    }

    #[test]
    fn budget_agent_menu_capped() {
        let a = budget_agent(0.5, 4).unwrap();
        assert!(a
            .outcomes
            .iter()
            .all(|w| w.payment <= 0.5 + 1e-12));
        assert!(a.outcomes.iter().any(|w| !w.service && w.payment > 0.0));
    }
}
