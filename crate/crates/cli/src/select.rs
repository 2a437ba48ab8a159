//! Configured premise selectors trained on a dependency database.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{Context, Result};
use lgp_core::corpus::{DependencyDb, Fact};
use lgp_core::ensemble::{fuse, EnsembleSpec};
use lgp_core::par::Exec;
use lgp_core::selectors::{train_knn_with_index, train_nb_with_index, FactIndex, KnnModel, KnnParams, NbModel, NbParams, Ranking, K};

use crate::config::{SelectorKind, Workspace};

enum Trained {
    Knn(KnnModel, K),
    Nb(NbModel),
    Ensemble(EnsembleSpec),
}

pub struct Selectors {
    models: BTreeMap<String, Trained>,
}

impl Selectors {
    /// Trains every configured selector on `db`, sharing one fact index.
    pub fn train(ws: &Workspace, index: &Arc<FactIndex>, db: &DependencyDb) -> Result<Selectors> {
        let mut models = BTreeMap::new();
        for s in &ws.cfg.selectors {
            let corpus = ws.corpus.clone();
            let m = match s.kind {
                SelectorKind::Knn => {
                    let k = s.k.map_or(K::Var, K::Fixed);
                    Trained::Knn(train_knn_with_index(corpus, index.clone(), db, KnnParams::default())?, k)
                }
                SelectorKind::Nb | SelectorKind::NbExt => {
                    let ext = s.kind == SelectorKind::NbExt;
                    Trained::Nb(train_nb_with_index(corpus, index.clone(), db, ext, NbParams::default())?)
                }
                SelectorKind::Ensemble => Trained::Ensemble(ws.cfg.ensemble_spec(s)?),
            };
            models.insert(s.id.clone(), m);
        }
        Ok(Selectors { models })
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.models.keys().map(String::as_str)
    }

    /// Chronological top-`n` ranking of premises for `conjecture`.
    pub fn rank(&self, id: &str, conjecture: &Fact, n: usize, universe: &[String]) -> Result<Ranking> {
        let model = self.models.get(id).with_context(|| format!("unknown selector `{id}`"))?;
        Ok(match model {
            Trained::Knn(m, k) => m.predict(conjecture, *k, n, true)?,
            Trained::Nb(m) => m.predict(conjecture, n, true)?,
            Trained::Ensemble(spec) => {
                let members = spec.members.iter().map(|(m, _)| self.rank(m, conjecture, n, universe)).collect::<Result<Vec<_>>>()?;
                let earlier = &universe[..conjecture.serial.min(universe.len())];
                fuse(&members, spec, earlier)?.top(n)
            }
        })
    }
}

/// Shared fact index of a workspace.
pub fn build_index(ws: &Workspace, exec: Exec) -> Arc<FactIndex> {
    Arc::new(FactIndex::build(&ws.corpus, &ws.features, exec))
}
