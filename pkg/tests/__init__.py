"""Tests for gaugecheck"""
