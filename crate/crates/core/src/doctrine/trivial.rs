use std::fmt;

use super::{Capabilities, Doctrine, HeytingOp};
use crate::error::Result;
use crate::finbase::{BaseCat, FinMap, FinSet};

/// The only element of a trivial fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point;

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("*")
    }
}

/// Every fiber has exactly one element.
#[derive(Debug, Clone)]
pub struct TrivialDoctrine {
    base: BaseCat,
}

impl TrivialDoctrine {
    pub fn new(base: BaseCat) -> TrivialDoctrine {
        TrivialDoctrine { base }
    }
}

impl Doctrine for TrivialDoctrine {
    type Elem = Point;

    fn name(&self) -> String {
        "trivial".into()
    }

    fn base(&self) -> &BaseCat {
        &self.base
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ALL
    }

    fn fiber(&self, _obj: FinSet) -> Result<Vec<Point>> {
        Ok(vec![Point])
    }

    fn leq(&self, _obj: FinSet, _lhs: &Point, _rhs: &Point) -> Result<bool> {
        Ok(true)
    }

    fn reindex(&self, _f: &FinMap, _e: &Point) -> Result<Point> {
        Ok(Point)
    }

    fn exists_fast(&self, _f: &FinMap, _e: &Point) -> Option<Result<Point>> {
        Some(Ok(Point))
    }

    fn forall_fast(&self, _f: &FinMap, _e: &Point) -> Option<Result<Point>> {
        Some(Ok(Point))
    }

    fn heyting_fast(&self, _obj: FinSet, _op: HeytingOp, _args: &[Point]) -> Option<Result<Point>> {
        Some(Ok(Point))
    }

    fn equality_fast(&self, _a: FinSet) -> Option<Result<Point>> {
        Some(Ok(Point))
    }
}
