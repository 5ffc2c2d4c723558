//! A trie over letter sequences for prefix-closed word sets.
//!
//! Every set stored here (monomial subword sets, small-piece sets) is closed
//! under taking subwords, hence under taking prefixes — so membership is
//! simply "the walk exists" and no terminal flags are needed. The empty word
//! is handled by callers; the trie stores nonempty words only.

use crate::word::Letter;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct WordTrie {
    /// `children[node * width + letter.index()]` = child node or `NONE`.
    children: Vec<u32>,
    width: usize,
}

impl WordTrie {
    /// `width` = number of distinct letters = 2 × alphabet rank.
    pub fn new(width: usize) -> Self {
        WordTrie { children: vec![NONE; width], width }
    }

    pub fn node_count(&self) -> usize {
        self.children.len() / self.width
    }

    /// Inserts a word; all its prefixes become members implicitly.
    pub fn insert(&mut self, letters: &[Letter]) {
        let mut node = 0usize;
        for l in letters {
            let slot = node * self.width + l.index();
            let next = self.children[slot];
            node = if next == NONE {
                let fresh = self.node_count() as u32;
                self.children[slot] = fresh;
                self.children.extend(std::iter::repeat(NONE).take(self.width));
                fresh as usize
            } else {
                next as usize
            };
        }
    }

    pub fn contains(&self, letters: &[Letter]) -> bool {
        self.max_walk(letters) == letters.len()
    }

    /// Length of the longest prefix of `letters` stored in the trie.
    pub fn max_walk(&self, letters: &[Letter]) -> usize {
        let mut node = 0usize;
        for (i, l) in letters.iter().enumerate() {
            let next = self.children[node * self.width + l.index()];
            if next == NONE {
                return i;
            }
            node = next as usize;
        }
        letters.len()
    }
}
