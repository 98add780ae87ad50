//! Bernoulli probe simulation and the receiver observation matrix.
//!
//! All randomness comes from SplitMix64 so that runs are bit-identical
//! across platforms and languages. One variate is drawn per link per probe
//! regardless of whether the parent was reached, keeping the stream layout
//! independent of outcomes.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::bits::BitSeq;
use crate::topology::{NodeId, Tree};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("probes must be >= 1")]
    ZeroProbes,
    #[error("observation line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// SplitMix64 generator. The whole sequence is a pure function of the seed.
#[derive(Debug, Clone, Copy)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform variate in [0,1) using the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Per-replicate seed derivation used by the harness: one SplitMix64 step
/// applied to master seed + replicate index.
pub fn derive_seed(master_seed: u64, replicate: u64) -> u64 {
    SplitMix64::new(master_seed.wrapping_add(replicate)).next_u64()
}

/// Binary probe outcomes at the receivers: `X_k^j = 1` iff probe `j`
/// reached receiver `k`.
#[derive(Debug, Clone)]
pub struct ObservationMatrix {
    receiver_ids: Vec<NodeId>,
    outcomes: Vec<BitSeq>,
}

impl ObservationMatrix {
    /// Build a matrix from receiver ids (ascending) and one indicator
    /// sequence per receiver, all the same length.
    pub fn from_outcomes(receiver_ids: Vec<NodeId>, outcomes: Vec<BitSeq>) -> ObservationMatrix {
        assert_eq!(receiver_ids.len(), outcomes.len());
        assert!(receiver_ids.windows(2).all(|w| w[0] < w[1]));
        if let Some(first) = outcomes.first() {
            assert!(outcomes.iter().all(|s| s.len() == first.len()));
        }
        ObservationMatrix {
            receiver_ids,
            outcomes,
        }
    }

    pub fn probe_count(&self) -> usize {
        self.outcomes.first().map_or(0, |s| s.len())
    }

    /// Receiver node ids, ascending.
    pub fn receiver_ids(&self) -> &[NodeId] {
        &self.receiver_ids
    }

    /// Indicator sequence of the receiver at position `idx` of `receiver_ids`.
    pub fn outcomes(&self, idx: usize) -> &BitSeq {
        &self.outcomes[idx]
    }

    /// Indicator sequence of receiver `node`, if present.
    pub fn outcomes_for(&self, node: NodeId) -> Option<&BitSeq> {
        let idx = self.receiver_ids.binary_search(&node).ok()?;
        Some(&self.outcomes[idx])
    }

    /// Write the observation CSV: metadata comments, header
    /// `probe,<id>,...`, then one 0/1 row per probe (1-based probe index).
    pub fn write_csv<W: Write>(
        &self,
        w: &mut W,
        seed: u64,
        topology_name: &str,
    ) -> io::Result<()> {
        let n = self.probe_count();
        writeln!(
            w,
            "# seed={seed} n={n} rng=splitmix64 topology={topology_name}"
        )?;
        write!(w, "probe")?;
        for id in &self.receiver_ids {
            write!(w, ",{id}")?;
        }
        writeln!(w)?;
        for j in 0..n {
            write!(w, "{}", j + 1)?;
            for s in &self.outcomes {
                write!(w, ",{}", s.get(j) as u8)?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Read the observation CSV produced by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, SimError> {
        let mut receiver_ids: Vec<NodeId> = Vec::new();
        let mut rows: Vec<Vec<bool>> = Vec::new();
        let mut saw_header = false;

        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let lno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !saw_header {
                let mut cols = trimmed.split(',');
                if cols.next() != Some("probe") {
                    return Err(SimError::Parse {
                        line: lno,
                        msg: "header must start with `probe`".into(),
                    });
                }
                for c in cols {
                    let id: NodeId = c.parse().map_err(|_| SimError::Parse {
                        line: lno,
                        msg: format!("bad receiver id `{c}`"),
                    })?;
                    receiver_ids.push(id);
                }
                if receiver_ids.is_empty() {
                    return Err(SimError::Parse {
                        line: lno,
                        msg: "no receiver columns".into(),
                    });
                }
                saw_header = true;
                continue;
            }
            let mut cols = trimmed.split(',');
            cols.next(); // probe index
            let mut row = Vec::with_capacity(receiver_ids.len());
            for c in cols {
                match c {
                    "0" => row.push(false),
                    "1" => row.push(true),
                    other => {
                        return Err(SimError::Parse {
                            line: lno,
                            msg: format!("expected 0 or 1, got `{other}`"),
                        })
                    }
                }
            }
            if row.len() != receiver_ids.len() {
                return Err(SimError::Parse {
                    line: lno,
                    msg: format!(
                        "expected {} outcome columns, got {}",
                        receiver_ids.len(),
                        row.len()
                    ),
                });
            }
            rows.push(row);
        }
        if !saw_header {
            return Err(SimError::Parse {
                line: 0,
                msg: "missing header".into(),
            });
        }
        if rows.is_empty() {
            return Err(SimError::ZeroProbes);
        }

        let n = rows.len();
        let mut outcomes = vec![BitSeq::zeros(n); receiver_ids.len()];
        for (j, row) in rows.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                if v {
                    outcomes[k].set(j, true);
                }
            }
        }
        Ok(ObservationMatrix {
            receiver_ids,
            outcomes,
        })
    }
}

/// Simulate `n` i.i.d. probes over `tree`. Links are visited in ascending
/// child-node order and exactly one variate is drawn per link per probe, so
/// the matrix is a pure function of `(tree, n, seed)`.
pub fn simulate_probes(tree: &Tree, n: usize, seed: u64) -> Result<ObservationMatrix, SimError> {
    if n == 0 {
        return Err(SimError::ZeroProbes);
    }
    let m = tree.max_node();
    let receiver_ids: Vec<NodeId> = tree.receivers().to_vec();
    let mut outcomes = vec![BitSeq::zeros(n); receiver_ids.len()];
    let mut rng = SplitMix64::new(seed);
    let mut reached = vec![false; m + 1];

    for j in 0..n {
        reached[0] = true;
        for i in 1..=m {
            let u = rng.next_f64();
            reached[i] = reached[tree.parent(i)] && u < tree.link_rate(i);
        }
        for (k, &id) in receiver_ids.iter().enumerate() {
            if reached[id] {
                outcomes[k].set(j, true);
            }
        }
    }
    Ok(ObservationMatrix {
        receiver_ids,
        outcomes,
    })
}
