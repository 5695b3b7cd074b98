//! Structural dichotomies of a constraint graph: dismantlable or not
//! (folds), cop-win or robber-win (game solving), fertile or sterile.

mod fertility;
mod fold;
mod game;

use serde::Serialize;

pub use fertility::{is_fertile, Fertility, FertilityWitness};
pub use fold::{dismantle, find_fold, find_fold_in, FoldSequence};
pub use game::{cop_win, robber_replies, CopAttractor};

use crate::error::Result;
use crate::graphs::ConstraintGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub dismantlable: bool,
    pub fold_sequence: Option<FoldSequence>,
    pub cop_win: bool,
    pub fertile: bool,
    pub witness: Option<FertilityWitness>,
}

/// Runs all three classifiers. `h` must be connected with an edge.
pub fn classify(h: &ConstraintGraph) -> Result<ClassificationReport> {
    let cop_win = cop_win(h)?;
    let fold_sequence = dismantle(h);
    let fertility = is_fertile(h)?;
    Ok(ClassificationReport {
        dismantlable: fold_sequence.is_some(),
        fold_sequence,
        cop_win,
        fertile: fertility.fertile,
        witness: fertility.witness,
    })
}
