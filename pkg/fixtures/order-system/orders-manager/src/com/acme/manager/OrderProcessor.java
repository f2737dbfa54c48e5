package com.acme.manager;

import com.acme.models.OrderModel;

public class OrderProcessor {
    private OrderModel current;

    public void process(OrderModel model) {
        OrderModel.checkSchema();
        this.current = model;
    }

    public boolean idle() {
        return current == null;
    }
}
