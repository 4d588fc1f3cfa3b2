from .session import (RatingSession, ConfusionMatrix2x2, SessionStore,
                      create_session, record_rating, close_and_score)

__all__ = ["RatingSession", "ConfusionMatrix2x2", "SessionStore",
           "create_session", "record_rating", "close_and_score"]
