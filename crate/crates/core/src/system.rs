//! The shift families the engines understand, behind one interface.

use std::fmt;

use crate::automata::{DirectedGraph, LabeledGraph};
use crate::error::{Error, Result};
use crate::perturbation::{
    dgap_perturb_entropy, sft_entropy_single, sft_multi_gf, sgap_perturb_gf, sofic_perturb_set, EngineOptions,
    ForbiddenSet, PerturbationResult,
};
use crate::shifts::{dgap_presentation, sgap_entropy, GapSet};
use crate::word::{Alphabet, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum System {
    /// Full shift on `symbols` symbols.
    Full { symbols: u32 },
    /// Edge shift of a graph; words are edge walks.
    Sft { graph: DirectedGraph },
    /// Label shift of a presentation.
    Sofic { graph: LabeledGraph },
    SGap { gaps: GapSet },
    DGap { d: usize },
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::Full { symbols } => write!(f, "full {symbols}-shift"),
            System::Sft { graph } => write!(f, "edge shift on {} vertices", graph.vertices()),
            System::Sofic { graph } => write!(f, "sofic shift on {} vertices", graph.vertices()),
            System::SGap { gaps } => write!(f, "S-gap shift, S = {gaps}"),
            System::DGap { d } => write!(f, "{d}-gap shift"),
        }
    }
}

impl System {
    pub fn presentation(&self) -> Result<LabeledGraph> {
        Ok(match self {
            System::Full { symbols } => LabeledGraph::full_shift(*symbols),
            System::Sft { graph } => LabeledGraph::edge_shift(graph),
            System::Sofic { graph } => graph.clone(),
            System::SGap { gaps } => crate::shifts::sgap_presentation(gaps),
            System::DGap { d } => dgap_presentation(*d)?,
        })
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(self.presentation()?.alphabet())
    }

    pub fn ambient_lambda(&self, tol: f64) -> Result<f64> {
        match self {
            System::Full { symbols } => Ok(*symbols as f64),
            System::SGap { gaps } => sgap_entropy(gaps, tol),
            System::DGap { d } => sgap_entropy(&GapSet::multiples(*d)?, tol),
            _ => {
                let p = self.presentation()?;
                Ok(crate::automata::LanguageAutomaton::new(&p, &[]).growth().value)
            }
        }
    }

    fn edge_graph(&self) -> Option<DirectedGraph> {
        match self {
            System::Full { symbols } => Some(DirectedGraph::full_shift(*symbols as u64)),
            System::Sft { graph } => Some(graph.clone()),
            _ => None,
        }
    }

    /// The gap set when the system is an S-gap shift in disguise.
    fn gap_set(&self) -> Option<GapSet> {
        match self {
            System::Full { symbols: 2 } => Some(GapSet::naturals()),
            System::SGap { gaps } => Some(gaps.clone()),
            System::DGap { d } => GapSet::multiples(*d).ok(),
            _ => None,
        }
    }

    fn gap_period(&self) -> Option<usize> {
        match self {
            System::Full { symbols: 2 } => Some(1),
            System::DGap { d } => Some(*d),
            System::SGap { gaps } => (1..=gaps.period().len().max(gaps.preperiod().len()) + 1)
                .find(|&d| GapSet::multiples(d).as_ref() == Ok(gaps)),
            _ => None,
        }
    }

    /// The engine of choice for this system and `K`.
    pub fn perturb(&self, k: &ForbiddenSet, opts: EngineOptions) -> Result<PerturbationResult> {
        self.check_words(k)?;
        if let Some(g) = self.edge_graph() {
            return sft_multi_gf(&g, &walks(k), opts);
        }
        if let [w] = k.words() {
            let single = match self {
                System::SGap { gaps } => Some(sgap_perturb_gf(gaps, w, opts)),
                System::DGap { d } => Some(dgap_perturb_entropy(*d, w, opts)),
                _ => None,
            };
            match single {
                Some(Err(Error::Unsupported(why))) => {
                    let mut r = sofic_perturb_set(&self.presentation()?, k, opts)?.result;
                    r.notes.push(format!("closed form unavailable ({why}); used the sofic lift"));
                    return Ok(r);
                }
                Some(r) => return r,
                None => {}
            }
        }
        Ok(sofic_perturb_set(&self.presentation()?, k, opts)?.result)
    }

    /// Every engine that applies to this system and `K`, in a fixed order.
    /// Engines that do not support the input are skipped.
    pub fn perturb_all(&self, k: &ForbiddenSet, opts: EngineOptions) -> Result<Vec<PerturbationResult>> {
        self.check_words(k)?;
        let mut out = Vec::new();
        let mut push = |r: Result<PerturbationResult>| -> Result<()> {
            match r {
                Ok(r) => out.push(r),
                Err(Error::Unsupported(_)) | Err(Error::NotAllowed(_)) => {}
                Err(e) => return Err(e),
            }
            Ok(())
        };
        if let Some(g) = self.edge_graph() {
            if let [w] = k.words() {
                push(sft_entropy_single(&g, &walk_of(w), opts))?;
            }
            push(sft_multi_gf(&g, &walks(k), opts))?;
        }
        push(sofic_perturb_set(&self.presentation()?, k, opts).map(|s| s.result))?;
        if let [w] = k.words() {
            if let Some(s) = self.gap_set() {
                push(sgap_perturb_gf(&s, w, opts))?;
            }
            if let Some(d) = self.gap_period() {
                push(dgap_perturb_entropy(d, w, opts))?;
            }
        }
        Ok(out)
    }

    fn check_words(&self, k: &ForbiddenSet) -> Result<()> {
        let a = self.alphabet()?;
        k.words().iter().try_for_each(|w| a.check(w))
    }
}

fn walk_of(w: &Word) -> Vec<usize> {
    w.symbols().iter().map(|&s| s as usize).collect()
}

fn walks(k: &ForbiddenSet) -> Vec<Vec<usize>> {
    k.words().iter().map(walk_of).collect()
}
