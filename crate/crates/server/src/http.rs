use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use futures_util::{SinkExt, StreamExt};
use tokio::sync::broadcast;
use tower_http::services::ServeDir;

use crate::controller::Controller;
use crate::protocol::{registry_snapshot, ErrorCode, Event};

pub(crate) const EVENT_BACKLOG: usize = 4096;

pub(crate) struct Shared {
    pub controller: Mutex<Controller>,
    pub events: broadcast::Sender<Arc<str>>,
}

impl Shared {
    /// Publishes to every client. Callers hold the controller lock so
    /// broadcast order matches the order changes were applied.
    pub fn publish(&self, event: &Event) {
        // No subscribers is fine.
        let _ = self.events.send(Arc::from(event.to_json()));
    }
}

pub(crate) fn router(shared: Arc<Shared>, static_dir: Option<PathBuf>) -> Router {
    let router = Router::new()
        .route("/ws", get(upgrade))
        .route("/api/registry", get(|| async { Json(registry_snapshot()) }))
        .route("/api/state", get(state));
    let router = match static_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router.route("/", get(|| async { Html(LANDING) })),
    };
    router.with_state(shared)
}

const LANDING: &str = "<!doctype html><title>gloam</title>\
<p>gloam server. Control socket at <code>/ws</code>, parameter registry at \
<a href=\"/api/registry\">/api/registry</a>. Start with <code>--static-dir</code> to serve a control surface.</p>";

async fn state(State(shared): State<Arc<Shared>>) -> Response {
    let event = shared.controller.lock().expect("controller lock").state();
    Json(event).into_response()
}

async fn upgrade(ws: WebSocketUpgrade, State(shared): State<Arc<Shared>>) -> Response {
    ws.on_upgrade(move |socket| client(socket, shared))
}

async fn client(socket: WebSocket, shared: Arc<Shared>) {
    let (mut tx, mut rx) = socket.split();
    let (greeting, mut events) = {
        let c = shared.controller.lock().expect("controller lock");
        // Subscribe under the lock so nothing published after this snapshot is missed.
        ([Controller::hello(), c.state()], shared.events.subscribe())
    };
    for event in greeting {
        if tx.send(Message::Text(event.to_json().into())).await.is_err() {
            return;
        }
    }
    loop {
        tokio::select! {
            incoming = rx.next() => {
                let replies = match incoming {
                    Some(Ok(Message::Text(text))) => {
                        let mut c = shared.controller.lock().expect("controller lock");
                        match c.handle_text(&text) {
                            Ok(outcome) => {
                                for event in &outcome.broadcast {
                                    shared.publish(event);
                                }
                                outcome.reply
                            }
                            Err(e) => {
                                log::error!("{e}");
                                break;
                            }
                        }
                    }
                    Some(Ok(Message::Binary(_))) => vec![Event::Error {
                        request: None,
                        seq: None,
                        code: ErrorCode::Malformed,
                        message: "binary frames are not part of the protocol".into(),
                    }],
                    Some(Ok(Message::Close(_))) | None => break,
                    Some(Ok(_)) => continue,
                    Some(Err(e)) => {
                        log::debug!("client socket error: {e}");
                        break;
                    }
                };
                for event in replies {
                    if tx.send(Message::Text(event.to_json().into())).await.is_err() {
                        return;
                    }
                }
            }
            published = events.recv() => {
                let text: Arc<str> = match published {
                    Ok(text) => text,
                    Err(broadcast::error::RecvError::Lagged(n)) => {
                        log::warn!("client fell {n} events behind; resending state");
                        let state = shared.controller.lock().expect("controller lock").state();
                        Arc::from(state.to_json())
                    }
                    Err(broadcast::error::RecvError::Closed) => break,
                };
                if tx.send(Message::Text(text.as_ref().into())).await.is_err() {
                    return;
                }
            }
        }
    }
}
