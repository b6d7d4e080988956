#pragma once

#include <httplib.h>

#include <string>

#include "session.hpp"

namespace workbench {

inline void sendJson(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline Json errorBody(const std::string& kind, const std::string& message) {
  return Json{{"schemaVersion", kSchemaVersion}, {"error", kind}, {"message", message}};
}

// Runs f and maps engine errors onto HTTP statuses.
template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const NotMutable& e) {
    sendJson(res, 409, errorBody("NotMutable", e.what()));
  } catch (const AmbiguousExchange& e) {
    sendJson(res, 422, errorBody("AmbiguousExchange", e.what()));
  } catch (const DomainError& e) {
    sendJson(res, 422, errorBody("DomainError", e.what()));
  } catch (const ParseError& e) {
    sendJson(res, 400, errorBody("ParseError", e.what()));
  } catch (const Json::exception& e) {
    sendJson(res, 400, errorBody("ParseError", e.what()));
  }
}

inline void installRoutes(httplib::Server& svr, SessionStore& store) {
  auto withSession = [&store](const httplib::Request& req, httplib::Response& res, auto&& f) {
    auto s = store.find(req.path_params.at("id"));
    if (!s) return sendJson(res, 404, errorBody("NotFound", "no session " + req.path_params.at("id")));
    guarded(res, [&] { f(*s); });
  };

  svr.Post("/session", [&store](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
      sendJson(res, 201, store.create(body)->toJson());
    });
  });

  svr.Get("/session/:id", [withSession, &store](const httplib::Request& req, httplib::Response& res) {
    withSession(req, res, [&](Session& s) { sendJson(res, 200, store.read(s, [](const Session& r) { return r.toJson(); })); });
  });

  svr.Post("/session/:id/mutate", [withSession, &store](const httplib::Request& req, httplib::Response& res) {
    withSession(req, res, [&](Session& s) {
      Json body = Json::parse(req.body);
      std::string at = jsonText(body.at("at"), "at");
      sendJson(res, 200, store.write(s, [&](Session& w) { return w.mutate(at); }));
    });
  });

  svr.Post("/session/:id/undo", [withSession, &store](const httplib::Request& req, httplib::Response& res) {
    withSession(req, res, [&](Session& s) {
      Json out = store.write(s, [](Session& w) {
        if (w.history().empty()) return Json();
        w.undo();
        return w.toJson();
      });
      if (out.is_null()) return sendJson(res, 409, errorBody("EmptyHistory", "nothing to undo"));
      sendJson(res, 200, out);
    });
  });

  svr.Get("/session/:id/embedding", [withSession, &store](const httplib::Request& req, httplib::Response& res) {
    withSession(req, res, [&](Session& s) { sendJson(res, 200, store.read(s, [](const Session& r) { return r.embedding(); })); });
  });

  svr.Get("/session/:id/arspace-svg", [withSession, &store](const httplib::Request& req, httplib::Response& res) {
    withSession(req, res, [&](Session& s) {
      res.status = 200;
      res.set_content(store.read(s, [](const Session& r) { return r.svg(); }), "image/svg+xml");
    });
  });
}

}  // namespace workbench
