//! The list of reproducible scenarios.

use spinmech::dynamics::EvolveOptions;

use crate::config::Integrator;
use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Params};
use crate::scenarios;
use crate::table::Table;

/// Inputs a scenario body sees.
pub struct Context<'a> {
    pub params: &'a Params,
    pub integrator: Integrator,
    pub seed: u64,
}

impl Context<'_> {
    pub fn options(&self) -> EvolveOptions {
        self.integrator.options()
    }
}

/// Tables plus scalar results that go into the manifest's [derived] table.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub derived: toml::Table,
}

impl Outcome {
    pub fn record(&mut self, key: impl Into<String>, value: impl Into<toml::Value>) {
        self.derived.insert(key.into(), value.into());
    }

    /// Records a float; non-finite values are stored as strings.
    pub fn record_f64(&mut self, key: impl Into<String>, value: f64) {
        let v = if value.is_finite() { toml::Value::Float(value) } else { toml::Value::String(value.to_string()) };
        self.derived.insert(key.into(), v);
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

pub struct Scenario {
    pub id: &'static str,
    pub description: &'static str,
    pub params: fn() -> Vec<ParamSpec>,
    pub run: fn(&Context) -> Result<Outcome>,
    /// Factor on the default adaptive tolerances.
    pub tolerance_scale: f64,
}

static REGISTRY: [Scenario; 14] = [
    Scenario {
        id: "fig2b",
        description: "phonon number and spin inversion with and without the two-phonon drive",
        params: scenarios::fig2::params,
        run: scenarios::fig2::run_phonon_panel,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "fig2c",
        description: "spin dynamics for each r plus fitted coupling rates against a diagonalization oracle",
        params: scenarios::fig2::params,
        run: scenarios::fig2::run_spin_panel,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "fig3",
        description: "closed-form spin-spin enhancement versus r and versus the pump ratio",
        params: scenarios::closed_form::fig3_params,
        run: scenarios::closed_form::fig3,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "fig4",
        description: "one-axis-twisting spin squeezing of six spins with dephasing",
        params: scenarios::squeezing::params,
        run: scenarios::squeezing::run,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "figS1",
        description: "pump amplitude versus electrode gap for the cantilever device",
        params: scenarios::closed_form::figs1_params,
        run: scenarios::closed_form::figs1,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "figS2",
        description: "squeezed-frame total versus Rabi Hamiltonian dynamics",
        params: scenarios::frames::figs2_params,
        run: scenarios::frames::figs2,
        tolerance_scale: 1e-2,
    },
    Scenario {
        id: "figS3",
        description: "spin and Fock-state fidelities for a family of r values",
        params: scenarios::fidelities::params,
        run: scenarios::fidelities::run,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "figS5",
        description: "Lamb-Dicke boundary of the mechanical detuning versus r",
        params: scenarios::closed_form::figs5_params,
        run: scenarios::closed_form::figs5,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "figS6",
        description: "four-spin ground-state populations under the Rabi and Ising models, with and without disorder",
        params: scenarios::ising::params,
        run: scenarios::ising::run,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "figS7",
        description: "time-dependent squeezing ramp, total versus Rabi Hamiltonian",
        params: scenarios::frames::figs7_params,
        run: scenarios::frames::figs7,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "figS8",
        description: "cat-state fidelity under the squeezing ramp with dissipation",
        params: scenarios::frames::figs8_params,
        run: scenarios::frames::figs8,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "figS9",
        description: "two-spin GHZ fidelity and concurrence through virtual phonons",
        params: scenarios::ghz::params,
        run: scenarios::ghz::run,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "sw-check",
        description: "residual of the second-order spin-spin reduction at eta and eta/2",
        params: scenarios::sw::params,
        run: scenarios::sw::run,
        tolerance_scale: 1.0,
    },
    Scenario {
        id: "custom",
        description: "user-specified model, frame and initial state",
        params: scenarios::custom::params,
        run: scenarios::custom::run,
        tolerance_scale: 1.0,
    },
];

pub fn all() -> &'static [Scenario] {
    &REGISTRY
}

pub fn find(id: &str) -> Result<&'static Scenario> {
    REGISTRY.iter().find(|s| s.id == id).ok_or_else(|| {
        let known: Vec<&str> = REGISTRY.iter().map(|s| s.id).collect();
        HarnessError::config(format!("unknown scenario {id:?}; known: {}", known.join(", ")))
    })
}
