use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Cooperative cancellation shared by the searches of one grading run.
///
/// Searches poll [`StopToken::should_stop`]; nothing is interrupted preemptively.
#[derive(Debug, Clone, Default)]
pub struct StopToken {
    deadline: Option<Instant>,
    cancelled: Arc<AtomicBool>,
}

impl StopToken {
    /// Never stops unless cancelled.
    pub fn unbounded() -> Self {
        Self::default()
    }

    pub fn at(deadline: Instant) -> Self {
        StopToken {
            deadline: Some(deadline),
            cancelled: Arc::default(),
        }
    }

    pub fn after(limit: Duration) -> Self {
        Self::at(Instant::now() + limit)
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }

    pub fn cancel(&self) {
        self.cancelled.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.cancelled.load(Ordering::Relaxed)
    }

    pub fn deadline_passed(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn should_stop(&self) -> bool {
        self.is_cancelled() || self.deadline_passed()
    }
}
