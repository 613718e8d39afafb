//! Order-preserving parallel evaluation over word streams.

use rayon::prelude::*;

use crate::word::Word;

const CHUNK: usize = 4096;

/// Applies `f` to every word, in parallel within fixed-size chunks, and
/// returns the results in stream order. The first error in stream order wins.
pub(crate) fn map_in_order<I, T, E, F>(words: I, f: F) -> Result<Vec<(Word, T)>, E>
where
    I: Iterator<Item = Word>,
    T: Send,
    E: Send,
    F: Fn(&Word) -> Result<Option<T>, E> + Sync,
{
    let mut out = Vec::new();
    let mut words = words.peekable();
    while words.peek().is_some() {
        let chunk: Vec<Word> = words.by_ref().take(CHUNK).collect();
        let results: Vec<Result<Option<T>, E>> = chunk.par_iter().map(&f).collect();
        for (w, r) in chunk.into_iter().zip(results) {
            if let Some(t) = r? {
                out.push((w, t));
            }
        }
    }
    Ok(out)
}

/// The first word in stream order for which `f` yields `Some`.
pub(crate) fn find_first<I, T, E, F>(words: I, f: F) -> Result<Option<(Word, T)>, E>
where
    I: Iterator<Item = Word>,
    T: Send,
    E: Send,
    F: Fn(&Word) -> Result<Option<T>, E> + Sync,
{
    let mut words = words.peekable();
    while words.peek().is_some() {
        let chunk: Vec<Word> = words.by_ref().take(CHUNK).collect();
        let results: Vec<Result<Option<T>, E>> = chunk.par_iter().map(&f).collect();
        for (w, r) in chunk.into_iter().zip(results) {
            if let Some(t) = r? {
                return Ok(Some((w, t)));
            }
        }
    }
    Ok(None)
}
