//! In-memory projects with optional directory persistence.
//!
//! Each project sits behind its own mutex, taken only for short updates:
//! looking up or filling the saturation cache and inserting a finished
//! proof. Proof search itself runs without the lock.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use anyhow::Context;
use dlproof_core::elh::{saturate, FragmentError};
use dlproof_core::render::functional;
use dlproof_core::{parse_ontology, DerivationStructure, Fragment, Ontology, ParseError};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

/// A stored proof; `json` is the exact body served for it.
#[derive(Clone, Debug)]
pub struct ProofRecord {
    pub id: String,
    pub json: Arc<str>,
    pub known_signature: Vec<String>,
}

#[derive(Default)]
struct ProjectState {
    saturation: Option<Arc<DerivationStructure>>,
    proofs: BTreeMap<String, ProofRecord>,
    next_proof: u64,
}

pub struct Project {
    pub id: String,
    pub name: String,
    pub ontology: Arc<Ontology>,
    pub fragment: Fragment,
    state: Mutex<ProjectState>,
}

impl Project {
    fn new(id: String, name: String, ontology: Ontology) -> Self {
        let fragment = ontology.fragment();
        Project { id, name, ontology: Arc::new(ontology), fragment, state: Mutex::new(ProjectState::default()) }
    }

    /// The cached saturation, computed on first use.
    pub fn saturation(&self) -> Result<Arc<DerivationStructure>, FragmentError> {
        let mut st = self.state.lock();
        if let Some(d) = &st.saturation {
            return Ok(d.clone());
        }
        let d = Arc::new(saturate(&self.ontology)?);
        st.saturation = Some(d.clone());
        Ok(d)
    }

    /// Reserves the next proof id.
    pub fn next_proof_id(&self) -> String {
        let mut st = self.state.lock();
        st.next_proof += 1;
        format!("p{}", st.next_proof)
    }

    pub fn proof(&self, id: &str) -> Option<ProofRecord> {
        self.state.lock().proofs.get(id).cloned()
    }

    fn insert_proof(&self, rec: ProofRecord) {
        let mut st = self.state.lock();
        if let Some(n) = rec.id.strip_prefix('p').and_then(|n| n.parse::<u64>().ok()) {
            st.next_proof = st.next_proof.max(n);
        }
        st.proofs.insert(rec.id.clone(), rec);
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct StoredProject {
    id: String,
    name: String,
    ontology_text: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct StoredProof {
    known_signature: Vec<String>,
    proof: serde_json::Value,
}

#[derive(Default)]
pub struct Store {
    projects: RwLock<HashMap<String, Arc<Project>>>,
    next: AtomicU64,
    dir: Option<PathBuf>,
}

impl Store {
    pub fn in_memory() -> Self {
        Store::default()
    }

    /// Opens `dir`, loading every project and proof saved there.
    pub fn persistent(dir: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(dir.join("projects")).with_context(|| format!("creating {}", dir.display()))?;
        let store = Store { dir: Some(dir.to_path_buf()), ..Store::default() };
        let mut entries: Vec<PathBuf> = fs::read_dir(dir.join("projects"))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        for path in entries {
            let sp: StoredProject = serde_json::from_str(&fs::read_to_string(&path)?)
                .with_context(|| format!("reading {}", path.display()))?;
            let o = parse_ontology(&sp.ontology_text).with_context(|| format!("parsing {}", path.display()))?;
            let project = Arc::new(Project::new(sp.id.clone(), sp.name, o));
            let proofs_dir = dir.join("proofs").join(&sp.id);
            if proofs_dir.is_dir() {
                for e in fs::read_dir(&proofs_dir)? {
                    let p = e?.path();
                    let Some(id) = p.file_stem().and_then(|s| s.to_str()).map(str::to_string) else { continue };
                    let stored: StoredProof = serde_json::from_str(&fs::read_to_string(&p)?)?;
                    project.insert_proof(ProofRecord {
                        id,
                        json: serde_json::to_string(&stored.proof)?.into(),
                        known_signature: stored.known_signature,
                    });
                }
            }
            if let Some(n) = sp.id.strip_prefix("prj-").and_then(|n| u64::from_str_radix(n, 16).ok()) {
                store.next.fetch_max(n + 1, Ordering::SeqCst);
            }
            store.projects.write().insert(sp.id, project);
        }
        Ok(store)
    }

    pub fn create(&self, name: &str, text: &str) -> Result<Arc<Project>, ParseError> {
        let mut o = parse_ontology(text)?;
        o.set_name(name);
        let id = format!("prj-{:06x}", self.next.fetch_add(1, Ordering::SeqCst));
        let project = Arc::new(Project::new(id.clone(), name.to_string(), o));
        if let Some(dir) = &self.dir {
            let text: Vec<String> = project.ontology.iter().map(functional).collect();
            let sp = StoredProject { id: id.clone(), name: name.to_string(), ontology_text: text.join("\n") };
            if let Err(e) = write_json(&dir.join("projects").join(format!("{id}.json")), &sp) {
                log::warn!("could not persist project {id}: {e:#}");
            }
        }
        self.projects.write().insert(id, project.clone());
        Ok(project)
    }

    pub fn get(&self, id: &str) -> Option<Arc<Project>> {
        self.projects.read().get(id).cloned()
    }

    pub fn add_proof(&self, project: &Project, rec: ProofRecord) {
        if let Some(dir) = &self.dir {
            let stored = StoredProof {
                known_signature: rec.known_signature.clone(),
                proof: serde_json::from_str(&rec.json).expect("stored proofs are valid JSON"),
            };
            let path = dir.join("proofs").join(&project.id).join(format!("{}.json", rec.id));
            if let Err(e) = write_json(&path, &stored) {
                log::warn!("could not persist proof {}: {e:#}", rec.id);
            }
        }
        project.insert_proof(rec);
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, serde_json::to_vec_pretty(value)?)?;
    Ok(())
}
