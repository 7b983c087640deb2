use advice_soco_core::algorithms::{Aobd, AobdParams, Aos, Blind, FollowThePrediction, Greedy, OnlineAlgorithm};
use advice_soco_core::model::{DecisionSpace, RealLine};
use advice_soco_core::Result;

use crate::cli::Algo;
use crate::error::{CliError, CliResult};

/// The algorithms that run on every decision space.
#[derive(Debug, Clone)]
pub enum Online<P> {
    Blind,
    Greedy,
    Ftp(FollowThePrediction<P>),
    Aos(Aos<P>),
}

impl<P: Clone> Online<P> {
    pub fn new(algo: Algo, x0: P, delta: f64) -> CliResult<Self> {
        Ok(match algo {
            Algo::Blind => Online::Blind,
            Algo::Greedy => Online::Greedy,
            Algo::Ftp => Online::Ftp(FollowThePrediction::new(x0)),
            Algo::Aos => Online::Aos(Aos::new(x0, delta)?),
            Algo::Aobd => return Err(CliError::config("aobd runs on line instances only")),
        })
    }
}

impl<S: DecisionSpace> OnlineAlgorithm<S> for Online<S::Point> {
    fn decide(&mut self, space: &S, cost: &S::Cost, prediction: &S::Point) -> Result<S::Point> {
        match self {
            Online::Blind => Blind.decide(space, cost, prediction),
            Online::Greedy => Greedy.decide(space, cost, prediction),
            Online::Ftp(a) => a.decide(space, cost, prediction),
            Online::Aos(a) => a.decide(space, cost, prediction),
        }
    }
}

/// Any algorithm on the real line.
#[derive(Debug, Clone)]
pub enum LineAlgo {
    Generic(Online<f64>),
    Aobd(Aobd),
}

impl LineAlgo {
    pub fn new(algo: Algo, x0: f64, delta: f64, band: Option<AobdParams>) -> CliResult<Self> {
        match algo {
            Algo::Aobd => {
                let params = match band {
                    Some(p) => p,
                    None => AobdParams::from_delta(delta)?,
                };
                Ok(LineAlgo::Aobd(Aobd::new(x0, params)))
            }
            other => Ok(LineAlgo::Generic(Online::new(other, x0, delta)?)),
        }
    }
}

impl OnlineAlgorithm<RealLine> for LineAlgo {
    fn decide(&mut self, space: &RealLine, cost: &<RealLine as DecisionSpace>::Cost, prediction: &f64) -> Result<f64> {
        match self {
            LineAlgo::Generic(a) => a.decide(space, cost, prediction),
            LineAlgo::Aobd(a) => a.decide(space, cost, prediction),
        }
    }
}
