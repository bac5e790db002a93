use chrono::NaiveDate;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Align {
    /// First trading day strictly after the date.
    Next,
    /// Last trading day strictly before the date.
    Previous,
    /// The date itself when it trades, otherwise the next trading day.
    SameOrNext,
}

/// Strictly increasing list of trading dates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TradingCalendar {
    dates: Vec<NaiveDate>,
}

impl TradingCalendar {
    /// Sorts and de-duplicates the input.
    pub fn new(mut dates: Vec<NaiveDate>) -> Self {
        dates.sort_unstable();
        dates.dedup();
        Self { dates }
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn first(&self) -> Option<NaiveDate> {
        self.dates.first().copied()
    }

    pub fn last(&self) -> Option<NaiveDate> {
        self.dates.last().copied()
    }

    pub fn is_trading_day(&self, date: NaiveDate) -> bool {
        self.dates.binary_search(&date).is_ok()
    }

    /// Position of a trading day in the calendar.
    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        self.dates.binary_search(&date).ok()
    }

    pub fn date_at(&self, index: usize) -> Option<NaiveDate> {
        self.dates.get(index).copied()
    }

    pub fn align(&self, date: NaiveDate, direction: Align) -> Result<NaiveDate> {
        let (first, last) = match (self.first(), self.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::OutOfRange { date }),
        };
        if date < first || date > last {
            return Err(Error::OutOfRange { date });
        }
        let found = match direction {
            Align::SameOrNext => {
                let i = self.dates.partition_point(|d| *d < date);
                self.dates.get(i)
            }
            Align::Next => {
                let i = self.dates.partition_point(|d| *d <= date);
                self.dates.get(i)
            }
            Align::Previous => {
                let i = self.dates.partition_point(|d| *d < date);
                i.checked_sub(1).and_then(|j| self.dates.get(j))
            }
        };
        found.copied().ok_or(Error::OutOfRange { date })
    }

    /// The trading day `steps` positions away from a trading day.
    pub fn offset(&self, date: NaiveDate, steps: isize) -> Result<NaiveDate> {
        let idx = self.index_of(date).ok_or(Error::OutOfRange { date })?;
        idx.checked_add_signed(steps)
            .and_then(|i| self.date_at(i))
            .ok_or(Error::OutOfRange { date })
    }
}
