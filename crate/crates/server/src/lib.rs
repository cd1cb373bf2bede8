//! Live host for the gloam engines: an audio thread fed through a wait-free
//! mailbox, and a websocket/HTTP front end speaking the JSON control protocol.

pub mod controller;
pub mod driver;
pub mod host;
mod http;
pub mod protocol;

use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use gloam_core::params::{EngineKind, ParamSet};
use gloam_core::preset::Preset;
use thiserror::Error;
use tokio::sync::{broadcast, oneshot};
use tokio::task::JoinHandle;

use crate::controller::Controller;
use crate::driver::{DriverConfig, NullAudio, Pacing, DEFAULT_BUFFER_FRAMES};
use crate::host::{AudioHost, METER_RATE_HZ};
use crate::http::Shared;

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("no audio output device backend is available in this build; run with --null-audio")]
    DeviceUnavailable,
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub bind: IpAddr,
    /// 0 picks a free port.
    pub port: u16,
    /// Used when no preset is given.
    pub engine: EngineKind,
    pub preset: Option<Preset>,
    /// Overrides the preset's seed.
    pub seed: Option<u64>,
    pub null_audio: bool,
    pub buffer_frames: usize,
    pub sample_rate: f64,
    pub pacing: Pacing,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServeConfig {
    fn default() -> Self {
        Self {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 8080,
            engine: EngineKind::Shadows,
            preset: None,
            seed: None,
            null_audio: false,
            buffer_frames: DEFAULT_BUFFER_FRAMES,
            sample_rate: 48_000.0,
            pacing: Pacing::RealTime,
            static_dir: None,
        }
    }
}

pub struct RunningServer {
    addr: SocketAddr,
    shutdown: oneshot::Sender<()>,
    http: JoinHandle<std::io::Result<()>>,
    meters: JoinHandle<()>,
    audio: NullAudio,
}

impl RunningServer {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stops accepting clients, stops the audio thread and returns the host.
    pub async fn shutdown(self) -> AudioHost {
        let _ = self.shutdown.send(());
        self.meters.abort();
        // Open websockets would hold graceful shutdown forever.
        let mut http = self.http;
        if tokio::time::timeout(Duration::from_secs(1), &mut http).await.is_err() {
            http.abort();
        }
        tokio::task::spawn_blocking(move || self.audio.stop())
            .await
            .expect("stopping the audio thread")
    }
}

/// Starts the audio thread and the HTTP/websocket listener.
pub async fn start(config: ServeConfig) -> Result<RunningServer, ServeError> {
    if !config.null_audio {
        return Err(ServeError::DeviceUnavailable);
    }
    let (engine, params, preset_name, preset_seed) = match &config.preset {
        Some(p) => (p.engine, p.param_set(), Some(p.name.clone()), p.seed),
        None => (config.engine, ParamSet::default(), None, None),
    };
    let seed = config.seed.or(preset_seed).unwrap_or(0);

    let addr = SocketAddr::new(config.bind, config.port);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| ServeError::Bind { addr, source })?;
    let addr = listener.local_addr()?;

    let (host, mailbox, meter_reader) = AudioHost::new(config.sample_rate, seed, engine, &params);
    let audio = NullAudio::start(
        host,
        DriverConfig {
            buffer_frames: config.buffer_frames,
            pacing: config.pacing,
            ..Default::default()
        },
    );
    let controller = Controller::new(mailbox, config.sample_rate, engine, params, preset_name);
    let shared = Arc::new(Shared {
        controller: Mutex::new(controller),
        events: broadcast::channel(http::EVENT_BACKLOG).0,
    });

    let meters = {
        let shared = shared.clone();
        tokio::spawn(async move {
            let mut tick = tokio::time::interval(Duration::from_secs_f64(1.0 / METER_RATE_HZ));
            tick.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Skip);
            loop {
                tick.tick().await;
                if let Some(m) = meter_reader.latest() {
                    let mut c = shared.controller.lock().expect("controller lock");
                    for event in c.observe_meter(&m) {
                        shared.publish(&event);
                    }
                }
            }
        })
    };

    let (shutdown, stop) = oneshot::channel::<()>();
    let app = http::router(shared, config.static_dir.clone());
    let http = tokio::spawn(async move {
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = stop.await;
            })
            .await
    });
    log::info!("listening on http://{addr} (websocket at /ws), engine {engine}, seed {seed}");
    Ok(RunningServer {
        addr,
        shutdown,
        http,
        meters,
        audio,
    })
}

/// Runs until Ctrl-C.
pub async fn serve(config: ServeConfig) -> Result<(), ServeError> {
    let server = start(config).await?;
    tokio::signal::ctrl_c().await?;
    log::info!("shutting down");
    server.shutdown().await;
    Ok(())
}
