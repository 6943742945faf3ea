//! Bounded background computations with deduplication by key.
//!
//! A request starts (or joins) the job for its key and waits up to a budget.
//! Jobs that finish in time answer the request directly; slower ones answer
//! with a job id that can be polled.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use tokio::sync::{watch, Semaphore};

/// Finished jobs kept for polling.
const RETAINED_JOBS: usize = 256;

/// Failure of a job, already mapped to an HTTP status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobFailure {
    #[serde(skip)]
    pub status: u16,
    pub error: String,
    pub detail: String,
}

pub type JobResult = Result<Value, JobFailure>;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status")]
pub enum JobStatus {
    Running,
    Done { result: Value },
    Failed { error: String, detail: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct JobInfo {
    pub id: String,
    pub key: String,
    #[serde(flatten)]
    pub status: JobStatus,
}

pub enum Outcome {
    Ready(JobResult),
    Pending(String),
}

struct Job {
    key: String,
    rx: watch::Receiver<Option<JobResult>>,
}

#[derive(Default)]
struct Registry {
    next: u64,
    jobs: HashMap<String, Job>,
    running: HashMap<String, String>,
    finished: VecDeque<String>,
}

#[derive(Clone)]
pub struct Jobs {
    registry: Arc<Mutex<Registry>>,
    permits: Arc<Semaphore>,
    budget: Duration,
}

impl Jobs {
    pub fn new(workers: usize, budget: Duration) -> Self {
        Jobs {
            registry: Arc::default(),
            permits: Arc::new(Semaphore::new(workers.max(1))),
            budget,
        }
    }

    /// Runs `work` for `key` unless a job for that key is already running, in
    /// which case that job is awaited instead.
    pub async fn run_or_defer<F>(&self, key: String, work: F) -> Outcome
    where
        F: FnOnce() -> JobResult + Send + 'static,
    {
        let (id, mut rx) = self.start(key, work);
        let outcome = match tokio::time::timeout(self.budget, rx.wait_for(Option::is_some)).await {
            Ok(Ok(r)) => Outcome::Ready(r.clone().expect("checked by wait_for")),
            Ok(Err(_)) => Outcome::Ready(Err(JobFailure {
                status: 500,
                error: "internal".into(),
                detail: "job dropped".into(),
            })),
            Err(_) => Outcome::Pending(id),
        };
        outcome
    }

    fn start<F>(&self, key: String, work: F) -> (String, watch::Receiver<Option<JobResult>>)
    where
        F: FnOnce() -> JobResult + Send + 'static,
    {
        let mut reg = self.registry.lock().expect("job registry poisoned");
        if let Some(id) = reg.running.get(&key) {
            let rx = reg.jobs[id].rx.clone();
            return (id.clone(), rx);
        }
        reg.next += 1;
        let id = format!("job-{}", reg.next);
        let (tx, rx) = watch::channel(None);
        reg.jobs.insert(id.clone(), Job {
            key: key.clone(),
            rx: rx.clone(),
        });
        reg.running.insert(key.clone(), id.clone());
        drop(reg);

        let registry = Arc::clone(&self.registry);
        let permits = Arc::clone(&self.permits);
        let job_id = id.clone();
        tokio::spawn(async move {
            let result = match permits.acquire_owned().await {
                Ok(_permit) => tokio::task::spawn_blocking(work).await.unwrap_or_else(|e| {
                    Err(JobFailure {
                        status: 500,
                        error: "internal".into(),
                        detail: format!("job panicked: {e}"),
                    })
                }),
                Err(_) => Err(JobFailure {
                    status: 503,
                    error: "unavailable".into(),
                    detail: "worker pool closed".into(),
                }),
            };
            let mut reg = registry.lock().expect("job registry poisoned");
            reg.running.remove(&key);
            reg.finished.push_back(job_id);
            while reg.finished.len() > RETAINED_JOBS {
                if let Some(old) = reg.finished.pop_front() {
                    reg.jobs.remove(&old);
                }
            }
            let _ = tx.send(Some(result));
        });
        (id, rx)
    }

    pub fn status(&self, id: &str) -> Option<JobInfo> {
        let reg = self.registry.lock().expect("job registry poisoned");
        let job = reg.jobs.get(id)?;
        let status = match &*job.rx.borrow() {
            None => JobStatus::Running,
            Some(Ok(v)) => JobStatus::Done { result: v.clone() },
            Some(Err(f)) => JobStatus::Failed {
                error: f.error.clone(),
                detail: f.detail.clone(),
            },
        };
        Some(JobInfo {
            id: id.to_string(),
            key: job.key.clone(),
            status,
        })
    }
}
