use std::collections::VecDeque;

use crate::quantum::{DensityMatrix, GhzSpectrum};

/// One state handed to the players before depolarization.
#[derive(Clone, Debug, PartialEq)]
pub enum SourceState {
    Spectrum(GhzSpectrum),
    Dense(DensityMatrix),
}

/// Supplier of the states the players share, one per round.
pub trait StateSource {
    fn n_players(&self) -> usize;

    /// `None` once the source is exhausted.
    fn next_state(&mut self) -> Option<SourceState>;
}

/// The same GHZ-diagonal state every round.
#[derive(Clone, Debug)]
pub struct IidSpectrumSource {
    spectrum: GhzSpectrum,
    remaining: Option<usize>,
}

impl IidSpectrumSource {
    pub fn new(spectrum: GhzSpectrum) -> Self {
        Self { spectrum, remaining: None }
    }

    pub fn limited(spectrum: GhzSpectrum, count: usize) -> Self {
        Self { spectrum, remaining: Some(count) }
    }
}

impl StateSource for IidSpectrumSource {
    fn n_players(&self) -> usize {
        self.spectrum.n_players()
    }

    fn next_state(&mut self) -> Option<SourceState> {
        if let Some(r) = self.remaining.as_mut() {
            if *r == 0 {
                return None;
            }
            *r -= 1;
        }
        Some(SourceState::Spectrum(self.spectrum.clone()))
    }
}

/// The same arbitrary density matrix every round.
#[derive(Clone, Debug)]
pub struct IidDenseSource {
    state: DensityMatrix,
    n_players: usize,
}

impl IidDenseSource {
    pub fn new(state: DensityMatrix, n_players: usize) -> Self {
        Self { state, n_players }
    }
}

impl StateSource for IidDenseSource {
    fn n_players(&self) -> usize {
        self.n_players
    }

    fn next_state(&mut self) -> Option<SourceState> {
        Some(SourceState::Dense(self.state.clone()))
    }
}

/// A fixed, possibly correlated, sequence of states.
#[derive(Clone, Debug)]
pub struct SequenceSource {
    states: VecDeque<SourceState>,
    n_players: usize,
}

impl SequenceSource {
    pub fn new(n_players: usize, states: impl IntoIterator<Item = SourceState>) -> Self {
        Self { states: states.into_iter().collect(), n_players }
    }
}

impl StateSource for SequenceSource {
    fn n_players(&self) -> usize {
        self.n_players
    }

    fn next_state(&mut self) -> Option<SourceState> {
        self.states.pop_front()
    }
}
