"""Chat-completions client with bounded retries and strict output parsing.

Retries cover 429 and 5xx responses plus transport errors, with delays of
backoff_base_s * 2^k between attempts. A 200 whose body does not carry the
documented structure fails immediately: reproducibility requires refusing to
guess what the model meant.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from typing import Callable

import httpx

from adstory.annotator import prompts
from adstory.annotator.base import (
    AnnotatorConfig,
    AnnotatorUnavailable,
    ClusterSummary,
    MalformedModelOutput,
    StoryVerdict,
    UnitAnnotation,
)
from adstory.ingest.types import Transcript
from adstory.segmentation.types import FunctionalUnit
from adstory.taxonomy import Taxonomy

TOKEN_ENV_VAR = "ADSTORY_ANNOTATOR_TOKEN"
DEBUG_ENV_VAR = "ADSTORY_DEBUG"

logger = logging.getLogger(__name__)


class RemoteAnnotator:
    """Talks to any chat-completions-compatible endpoint at temperature 0.

    max_in_flight is enforced with a semaphore shared by every caller of
    this instance; a custom transport and sleep function can be injected
    for tests.
    """

    def __init__(
        self,
        config: AnnotatorConfig,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        config.validate()
        if config.kind != "remote":
            raise ValueError("RemoteAnnotator requires kind='remote'")
        self.config = config
        self._client = httpx.Client(timeout=config.timeout_s, transport=transport)
        self._sleep = sleep
        self._gate = threading.BoundedSemaphore(config.max_in_flight)

    def detect_story(
        self, units: list[FunctionalUnit], transcript: Transcript
    ) -> StoryVerdict:
        payload = self._complete(prompts.story_detection_messages(units, transcript))
        if not isinstance(payload.get("has_story"), bool) or not isinstance(
            payload.get("rationale"), str
        ):
            raise MalformedModelOutput(f"bad story verdict payload: {payload}")
        signals = payload.get("signals", [])
        if not isinstance(signals, list) or not all(isinstance(s, str) for s in signals):
            raise MalformedModelOutput(f"bad signals payload: {signals}")
        return StoryVerdict(
            video_id=transcript.video_id,
            has_story=payload["has_story"],
            rationale=payload["rationale"],
            signals=signals,
        )

    def classify_units(
        self, units: list[FunctionalUnit], taxonomy: Taxonomy
    ) -> list[UnitAnnotation]:
        annotations = []
        for unit in units:
            payload = self._complete(
                prompts.unit_classification_messages(unit, taxonomy)
            )
            role_id = payload.get("role_id")
            confidence = payload.get("confidence")
            if not isinstance(role_id, str) or not isinstance(confidence, (int, float)):
                raise MalformedModelOutput(f"bad unit annotation payload: {payload}")
            if not 0.0 <= float(confidence) <= 1.0:
                raise MalformedModelOutput(f"confidence {confidence} outside [0, 1]")
            annotations.append(
                UnitAnnotation(
                    video_id="",
                    unit_index=unit.index,
                    role_id=role_id,
                    confidence=float(confidence),
                    rationale=str(payload.get("rationale", "")),
                )
            )
        return annotations

    def propose_cluster_names(self, clusters: list[ClusterSummary]) -> dict[str, str]:
        names = {}
        for summary in clusters:
            payload = self._complete(prompts.cluster_naming_messages(summary))
            name = payload.get("name")
            if not isinstance(name, str) or not name.strip():
                raise MalformedModelOutput(f"bad cluster name payload: {payload}")
            names[summary.cluster_id] = name
        return names

    def _complete(self, messages: list[dict]) -> dict:
        """POST one completion request, honoring the retry budget."""
        body = {
            "model": self.config.model_name,
            "messages": messages,
            "temperature": 0,
        }
        attempts = 0
        last_failure = "no attempt made"
        while attempts < self.config.max_attempts:
            attempts += 1
            try:
                with self._gate:
                    response = self._post(body)
            except httpx.HTTPError as exc:
                last_failure = f"transport error: {exc}"
            else:
                if response.status_code == 200:
                    return self._parse_completion(response)
                if response.status_code == 429 or response.status_code >= 500:
                    last_failure = f"status {response.status_code}"
                else:
                    raise AnnotatorUnavailable(
                        f"endpoint refused the request with status "
                        f"{response.status_code}"
                    )
            if attempts < self.config.max_attempts:
                self._sleep(self.config.backoff_base_s * 2 ** (attempts - 1))
        raise AnnotatorUnavailable(
            f"{attempts} attempts failed, last: {last_failure}"
        )

    def _post(self, body: dict) -> httpx.Response:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(TOKEN_ENV_VAR, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        if os.environ.get(DEBUG_ENV_VAR) == "1":
            redacted = dict(headers)
            if "Authorization" in redacted:
                redacted["Authorization"] = "Bearer [redacted]"
            logger.info("request %s headers=%s body=%s", self.config.endpoint_url, redacted, body)
        response = self._client.post(self.config.endpoint_url, json=body, headers=headers)
        if os.environ.get(DEBUG_ENV_VAR) == "1":
            logger.info("response %s body=%s", response.status_code, response.text[:2000])
        return response

    def _parse_completion(self, response: httpx.Response) -> dict:
        """Extract the strict JSON object from a chat-completions body.

        Any deviation raises MalformedModelOutput; 200s are never retried.
        """
        try:
            envelope = response.json()
            content = envelope["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise MalformedModelOutput(
                f"response is not a chat completion: {exc}"
            ) from exc
        try:
            payload = json.loads(content)
        except (json.JSONDecodeError, TypeError) as exc:
            raise MalformedModelOutput(
                f"completion content is not a JSON object: {content!r}"
            ) from exc
        if not isinstance(payload, dict):
            raise MalformedModelOutput(f"expected a JSON object, got: {payload!r}")
        return payload
