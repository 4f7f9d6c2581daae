//! Budgeted closure of a set of partial maps under composition, with
//! generator words tracked per map. Shared by the layer representation and
//! the Schutzenberger-graph machinery.

use crate::pmap::PartialMap;
use std::collections::HashMap;

pub struct MapClosure {
    pub maps: Vec<PartialMap>,
    pub index: HashMap<PartialMap, u32>,
    /// BFS parent links (parent, generator); generators link to themselves.
    word_link: Vec<(u32, u32)>,
    /// False when the budget stopped the closure early (maps is then a
    /// BFS-prefix of the closure, still usable for witness searches).
    pub complete: bool,
}

/// Closes `gens` under diagrammatic composition, keeping at most `budget`
/// maps. The empty map is not added unless generated.
pub fn close_maps(gens: &[PartialMap], budget: usize) -> MapClosure {
    let mut maps: Vec<PartialMap> = Vec::new();
    let mut index: HashMap<PartialMap, u32> = HashMap::new();
    let mut word_link: Vec<(u32, u32)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        if !index.contains_key(g) && maps.len() < budget {
            let id = maps.len() as u32;
            index.insert(g.clone(), id);
            maps.push(g.clone());
            word_link.push((id, gi as u32));
        }
    }
    let mut complete = maps.len() == gens.iter().collect::<std::collections::HashSet<_>>().len();
    let mut frontier = 0usize;
    'bfs: while frontier < maps.len() {
        for (gi, g) in gens.iter().enumerate() {
            let y = maps[frontier].then(g);
            if !index.contains_key(&y) {
                if maps.len() >= budget {
                    complete = false;
                    break 'bfs;
                }
                let id = maps.len() as u32;
                index.insert(y.clone(), id);
                maps.push(y);
                word_link.push((frontier as u32, gi as u32));
            }
        }
        frontier += 1;
    }
    MapClosure { maps, index, word_link, complete }
}

impl MapClosure {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Generator word (indices into the original `gens`) for map i.
    pub fn word_of(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = i as u32;
        loop {
            let (parent, gen) = self.word_link[cur as usize];
            out.push(gen as usize);
            if parent == cur {
                break;
            }
            cur = parent;
        }
        out.reverse();
        out
    }
}
